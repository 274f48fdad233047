#pragma once

// Line-oriented instance text format (`#` starts a comment):
//
//   applicant <name> quota=<int>
//   post <name> quota=<int>
//   pref <applicant> : <group> ; <group> ; ...     (a group of 2+ posts is a tie)
//   class <vertex> quota=<int> : <name> <name> ...
//   target = (x, y, ...)                            (optional)
//
// Vertex lines are read first, so the other lines may refer to vertices
// declared later in the file.

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "instance.hpp"
#include "validate.hpp"

namespace lamatch {

struct ParsedInstance {
  Instance instance;
  std::vector<Diagnostic> diagnostics;  // empty means the instance is valid
  std::optional<Signature> target;

  bool ok() const { return diagnostics.empty(); }
};

namespace detail {

inline std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

inline std::optional<int> parse_quota(const std::string& word) {
  constexpr std::string_view prefix = "quota=";
  if (word.rfind(prefix, 0) != 0) return std::nullopt;
  std::string digits = word.substr(prefix.size());
  if (digits.empty()) return std::nullopt;
  std::size_t used = 0;
  try {
    int v = std::stoi(digits, &used);
    if (used != digits.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace detail

inline ParsedInstance parse_instance(std::string_view text) {
  ParsedInstance out;
  struct Line {
    int number;
    std::string body;
  };
  std::vector<Line> lines;
  {
    std::istringstream in{std::string(text)};
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
      ++number;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
      lines.push_back(Line{number, raw});
    }
  }
  auto report = [&](int line, std::string msg) { out.diagnostics.push_back(Diagnostic{std::move(msg), line}); };
  Instance& inst = out.instance;

  // Pass 1: vertices.
  for (const Line& l : lines) {
    auto words = detail::split_words(l.body);
    if (words[0] != "applicant" && words[0] != "post") continue;
    if (words.size() < 2 || words.size() > 3) {
      report(l.number, "expected '" + words[0] + " <name> quota=<int>'");
      continue;
    }
    int quota = 1;
    if (words.size() == 3) {
      auto q = detail::parse_quota(words[2]);
      if (!q) {
        report(l.number, "malformed quota: " + words[2]);
        continue;
      }
      quota = *q;
    }
    if (words[0] == "applicant") inst.add_applicant(words[1], quota);
    else inst.add_post(words[1], quota);
  }

  // Pass 2: preferences, classes and the optional target.
  std::vector<int> pref_line(static_cast<std::size_t>(inst.applicant_count()), 0);
  for (const Line& l : lines) {
    auto words = detail::split_words(l.body);
    const std::string& kind = words[0];
    if (kind == "applicant" || kind == "post") continue;
    if (kind == "target") {
      auto eq = l.body.find('=');
      auto sig = eq == std::string::npos ? std::nullopt : parse_signature(std::string_view(l.body).substr(eq + 1));
      if (!sig) report(l.number, "malformed target signature");
      else out.target = sig;
      continue;
    }
    auto colon = l.body.find(':');
    if (kind != "pref" && kind != "class") {
      report(l.number, "unknown directive: " + kind);
      continue;
    }
    if (colon == std::string::npos) {
      report(l.number, "missing ':' in " + kind + " line");
      continue;
    }
    auto head = detail::split_words(std::string_view(l.body).substr(0, colon));
    std::string_view rest = std::string_view(l.body).substr(colon + 1);

    if (kind == "pref") {
      if (head.size() != 2) {
        report(l.number, "expected 'pref <applicant> : <group> ; ...'");
        continue;
      }
      auto a = inst.find(Side::applicant, head[1]);
      if (!a) {
        report(l.number, "unknown applicant: " + head[1]);
        continue;
      }
      if (pref_line[static_cast<std::size_t>(*a)] != 0) {
        report(l.number, "second preference list for " + head[1]);
        continue;
      }
      pref_line[static_cast<std::size_t>(*a)] = l.number;
      std::vector<std::vector<int>> groups;
      std::set<int> seen;
      std::size_t start = 0;
      bool bad = false;
      while (start <= rest.size()) {
        std::size_t end = rest.find(';', start);
        if (end == std::string_view::npos) end = rest.size();
        std::vector<int> group;
        for (const std::string& name : detail::split_words(rest.substr(start, end - start))) {
          auto p = inst.find(Side::post, name);
          if (!p) {
            report(l.number, "unknown post: " + name);
            bad = true;
          } else if (!seen.insert(*p).second) {
            report(l.number, "duplicate edge: " + head[1] + " ranks " + name + " more than once");
            bad = true;
          } else {
            group.push_back(*p);
          }
        }
        if (group.empty() && !bad) {
          report(l.number, "empty preference group: " + head[1]);
          bad = true;
        }
        groups.push_back(std::move(group));
        start = end + 1;
      }
      if (!bad) inst.set_preferences(*a, std::move(groups));
      continue;
    }

    // class <vertex> quota=<int> : members
    if (head.size() != 3) {
      report(l.number, "expected 'class <vertex> quota=<int> : <name> ...'");
      continue;
    }
    auto quota = detail::parse_quota(head[2]);
    if (!quota) {
      report(l.number, "malformed quota: " + head[2]);
      continue;
    }
    auto as_applicant = inst.find(Side::applicant, head[1]);
    auto as_post = inst.find(Side::post, head[1]);
    if (!as_applicant && !as_post) {
      report(l.number, "unknown vertex: " + head[1]);
      continue;
    }
    Side side = as_post ? Side::post : Side::applicant;
    int owner = as_post ? *as_post : *as_applicant;
    std::vector<int> members;
    bool bad = false;
    for (const std::string& name : detail::split_words(rest)) {
      auto w = inst.find(opposite(side), name);
      if (!w) {
        report(l.number, inst.find(side, name) ? "class member not a neighbor: " + name + " in class of " + head[1]
                                               : "unknown class member: " + name);
        bad = true;
        continue;
      }
      members.push_back(*w);
    }
    if (members.empty() && !bad) {
      report(l.number, "empty class of " + head[1]);
      bad = true;
    }
    if (!bad) inst.add_class(side, owner, std::move(members), *quota);
  }

  // Remaining structural checks have no single line to point at.
  if (out.diagnostics.empty()) {
    for (Diagnostic& d : validate(inst)) out.diagnostics.push_back(std::move(d));
  }
  return out;
}

/// Reads and parses a file. Throws std::ios_base::failure when unreadable.
inline ParsedInstance load_instance(const std::string& path) { return parse_instance(detail::read_file(path)); }

inline std::string write_instance(const Instance& inst, const std::optional<Signature>& target = std::nullopt) {
  std::ostringstream out;
  for (const Vertex& v : inst.applicants()) out << "applicant " << v.name << " quota=" << v.quota << '\n';
  for (const Vertex& v : inst.posts()) out << "post " << v.name << " quota=" << v.quota << '\n';
  for (int a = 0; a < inst.applicant_count(); ++a) {
    out << "pref " << inst.applicant(a).name << " :";
    const auto& groups = inst.preferences(a);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      out << (g ? " ;" : "");
      for (int p : groups[g]) out << ' ' << inst.post(p).name;
    }
    out << '\n';
  }
  for (const ClassDef& c : inst.classes()) {
    out << "class " << inst.vertex(c.owner_side, c.owner).name << " quota=" << c.quota << " :";
    for (int w : c.members) out << ' ' << inst.vertex(opposite(c.owner_side), w).name;
    out << '\n';
  }
  if (target) out << "target = " << target->to_string() << '\n';
  return out.str();
}

/// Matching files: either one `<applicant> <post>` pair per line, or a JSON
/// object with a "pairs" array of [applicant, post] arrays or
/// {"applicant": .., "post": ..} objects. Throws Error(parse).
inline Matching parse_matching(const Instance& inst, std::string_view text) {
  std::vector<Pair> pairs;
  auto resolve = [&](const std::string& a, const std::string& p, const std::string& where) {
    auto ai = inst.find(Side::applicant, a);
    auto pi = inst.find(Side::post, p);
    if (!ai) throw Error(ErrorKind::parse, where + "unknown applicant: " + a);
    if (!pi) throw Error(ErrorKind::parse, where + "unknown post: " + p);
    pairs.push_back(Pair{*ai, *pi});
  };
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::parse, e.what());
    }
    if (!doc.contains("pairs") || !doc["pairs"].is_array()) throw Error(ErrorKind::parse, "missing \"pairs\" array");
    for (const auto& item : doc["pairs"]) {
      if (item.is_array() && item.size() == 2 && item[0].is_string() && item[1].is_string()) {
        resolve(item[0].get<std::string>(), item[1].get<std::string>(), "");
      } else if (item.is_object() && item.contains("applicant") && item.contains("post")) {
        resolve(item["applicant"].get<std::string>(), item["post"].get<std::string>(), "");
      } else {
        throw Error(ErrorKind::parse, "malformed pair: " + item.dump());
      }
    }
    return Matching(std::move(pairs));
  }
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto words = detail::split_words(line);
    if (words.empty()) continue;
    std::string where = "line " + std::to_string(number) + ": ";
    if (words.size() != 2) throw Error(ErrorKind::parse, where + "expected '<applicant> <post>'");
    resolve(words[0], words[1], where);
  }
  return Matching(std::move(pairs));
}

}  // namespace lamatch
