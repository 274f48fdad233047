#pragma once

// Monotone 1-in-3 SAT and its reduction to matching with non-laminar post
// classifications. A formula is satisfiable (exactly one true variable per
// clause) iff the reduced instance has a feasible matching with signature
// (3m + n, 3m + n).

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "instance.hpp"

namespace lamatch {

struct MonotoneFormula {
  int variables = 0;
  std::vector<std::array<int, 3>> clauses;  // 1-based variable indices

  int occurrences(int var) const {
    int k = 0;
    for (const auto& c : clauses) k += static_cast<int>(std::count(c.begin(), c.end(), var));
    return k;
  }
};

/// Format: optional comment lines starting with `c` or `#`, a header
/// `p mono1in3 <n> <m>`, then m clauses of three distinct indices each (a
/// trailing 0 is accepted). Throws Error(parse).
inline MonotoneFormula parse_formula(std::string_view text) {
  MonotoneFormula f;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  int expected = -1;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string first;
    if (!(words >> first) || first == "c") continue;
    if (first == "p") {
      std::string kind;
      int n = -1;
      int m = -1;
      std::string extra;
      if (expected >= 0) fail("duplicate header");
      if (!(words >> kind >> n >> m) || kind != "mono1in3" || n < 0 || m < 0 || (words >> extra)) {
        fail("malformed header, expected 'p mono1in3 <n> <m>'");
      }
      f.variables = n;
      expected = m;
      continue;
    }
    if (expected < 0) fail("clause before header");
    std::vector<long long> values;
    std::istringstream nums(line);
    std::string token;
    while (nums >> token) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(token, &used);
      } catch (const std::exception&) {
        fail("not an integer: " + token);
      }
      if (used != token.size()) fail("not an integer: " + token);
      values.push_back(v);
    }
    if (values.size() == 4 && values.back() == 0) values.pop_back();
    if (values.size() != 3) fail("a clause needs exactly three variables");
    std::array<int, 3> clause{};
    for (std::size_t i = 0; i < 3; ++i) {
      if (values[i] < 1 || values[i] > f.variables) fail("variable index out of range: " + std::to_string(values[i]));
      clause[i] = static_cast<int>(values[i]);
    }
    if (clause[0] == clause[1] || clause[0] == clause[2] || clause[1] == clause[2]) {
      fail("repeated variable in clause");
    }
    f.clauses.push_back(clause);
  }
  if (expected < 0) throw Error(ErrorKind::parse, "missing 'p mono1in3' header");
  if (static_cast<int>(f.clauses.size()) != expected) {
    throw Error(ErrorKind::parse, "header announces " + std::to_string(expected) + " clauses, found " +
                                      std::to_string(f.clauses.size()));
  }
  return f;
}

inline std::string write_formula(const MonotoneFormula& f) {
  std::ostringstream out;
  out << "p mono1in3 " << f.variables << ' ' << f.clauses.size() << '\n';
  for (const auto& c : f.clauses) out << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  return out.str();
}

struct Reduction {
  Instance instance;
  Signature target;
};

/// Builds the matching instance for `f`. Names: a_i, b_i for variable i;
/// a_i_j, b_i_j for its occurrence in clause j; posts p_i, pt_i, pf_i and pc_j.
/// A variable without occurrences gets quota 1 on pt_i and pf_i.
inline Reduction reduce(const MonotoneFormula& f) {
  const int n = f.variables;
  const int m = static_cast<int>(f.clauses.size());
  auto s = [](int x) { return std::to_string(x); };
  Reduction r;
  Instance& inst = r.instance;

  std::vector<int> a(static_cast<std::size_t>(n) + 1);
  std::vector<int> b(static_cast<std::size_t>(n) + 1);
  for (int i = 1; i <= n; ++i) {
    a[static_cast<std::size_t>(i)] = inst.add_applicant("a_" + s(i), 1);
    b[static_cast<std::size_t>(i)] = inst.add_applicant("b_" + s(i), 1);
  }
  // Occurrence applicants indexed [clause][position].
  std::vector<std::array<int, 3>> ao(static_cast<std::size_t>(m));
  std::vector<std::array<int, 3>> bo(static_cast<std::size_t>(m));
  for (int j = 1; j <= m; ++j) {
    for (std::size_t k = 0; k < 3; ++k) {
      int i = f.clauses[static_cast<std::size_t>(j - 1)][k];
      ao[static_cast<std::size_t>(j - 1)][k] = inst.add_applicant("a_" + s(i) + "_" + s(j), 1);
      bo[static_cast<std::size_t>(j - 1)][k] = inst.add_applicant("b_" + s(i) + "_" + s(j), 1);
    }
  }

  std::vector<int> p(static_cast<std::size_t>(n) + 1);
  std::vector<int> pt(static_cast<std::size_t>(n) + 1);
  std::vector<int> pf(static_cast<std::size_t>(n) + 1);
  for (int i = 1; i <= n; ++i) {
    int quota = std::max(1, f.occurrences(i));
    p[static_cast<std::size_t>(i)] = inst.add_post("p_" + s(i), 1);
    pt[static_cast<std::size_t>(i)] = inst.add_post("pt_" + s(i), quota);
    pf[static_cast<std::size_t>(i)] = inst.add_post("pf_" + s(i), quota);
  }
  std::vector<int> pc(static_cast<std::size_t>(m));
  for (int j = 1; j <= m; ++j) pc[static_cast<std::size_t>(j - 1)] = inst.add_post("pc_" + s(j), 3);

  for (int i = 1; i <= n; ++i) {
    auto iu = static_cast<std::size_t>(i);
    inst.set_preferences(a[iu], {{p[iu]}, {pt[iu]}});
    inst.set_preferences(b[iu], {{p[iu]}, {pf[iu]}});
  }
  for (int j = 0; j < m; ++j) {
    auto ju = static_cast<std::size_t>(j);
    for (std::size_t k = 0; k < 3; ++k) {
      auto iu = static_cast<std::size_t>(f.clauses[ju][k]);
      inst.set_preferences(ao[ju][k], {{pc[ju]}, {pt[iu]}});
      inst.set_preferences(bo[ju][k], {{pc[ju]}, {pf[iu]}});
    }
  }

  for (int j = 0; j < m; ++j) {
    auto ju = static_cast<std::size_t>(j);
    for (std::size_t k = 0; k < 3; ++k) inst.add_class(Side::post, pc[ju], {ao[ju][k], bo[ju][k]}, 1);
    inst.add_class(Side::post, pc[ju], {ao[ju][0], ao[ju][1], ao[ju][2]}, 1);
    inst.add_class(Side::post, pc[ju], {bo[ju][0], bo[ju][1], bo[ju][2]}, 2);
  }
  for (int i = 1; i <= n; ++i) {
    auto iu = static_cast<std::size_t>(i);
    for (int j = 0; j < m; ++j) {
      auto ju = static_cast<std::size_t>(j);
      for (std::size_t k = 0; k < 3; ++k) {
        if (f.clauses[ju][k] != i) continue;
        inst.add_class(Side::post, pt[iu], {ao[ju][k], a[iu]}, 1);
        inst.add_class(Side::post, pf[iu], {bo[ju][k], b[iu]}, 1);
      }
    }
  }
  r.target = Signature{{3 * m + n, 3 * m + n}};
  return r;
}

struct SatResult {
  bool satisfiable = false;
  std::vector<bool> assignment;  // index 0 unused
};

/// Exhaustive search over all 2^n assignments. Throws Error(too_large) for n > 20.
inline SatResult brute_force_1in3(const MonotoneFormula& f) {
  if (f.variables > 20) throw Error(ErrorKind::too_large, "brute force is limited to 20 variables");
  const std::uint32_t limit = 1u << f.variables;
  for (std::uint32_t bits = 0; bits < limit; ++bits) {
    auto value = [&](int var) { return ((bits >> (var - 1)) & 1u) != 0; };
    bool ok = std::all_of(f.clauses.begin(), f.clauses.end(), [&](const auto& c) {
      return value(c[0]) + value(c[1]) + value(c[2]) == 1;
    });
    if (!ok) continue;
    SatResult r;
    r.satisfiable = true;
    r.assignment.assign(static_cast<std::size_t>(f.variables) + 1, false);
    for (int v = 1; v <= f.variables; ++v) r.assignment[static_cast<std::size_t>(v)] = value(v);
    return r;
  }
  return {};
}

}  // namespace lamatch
