// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "lamatch.hpp"

using namespace lamatch;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool same(const Signature& x, const Signature& y) { return compare_signatures(x, y) == std::strong_ordering::equal; }

std::string data(const std::string& name) { return std::string(LAMATCH_DATA_DIR) + "/" + name; }

Instance load(const std::string& name) {
  ParsedInstance p = load_instance(data(name));
  if (!p.ok()) throw std::runtime_error("bad data file " + name);
  return p.instance;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// |A| <= 5, |P| <= 4, r <= 3, quotas <= 2, |E| <= 12.
Instance small_instance(std::uint64_t seed, bool many_to_one) {
  Rng rng(seed * 7919 + 17);
  GeneratorParams p;
  p.applicants = rng.between(1, 5);
  p.posts = rng.between(1, 4);
  p.max_rank = 3;
  p.max_edges = 12;
  p.max_applicant_quota = 2;
  p.max_post_quota = 2;
  p.many_to_one = many_to_one;
  if (many_to_one && seed % 2 == 0) {
    // Tight capacity and strict lists, where popular matchings often fail to exist.
    p.applicants = 4;
    p.posts = rng.between(2, 3);
    p.max_post_quota = 1;
    p.tie_probability = 0;
  }
  return random_instance(seed, p);
}

struct Report {
  int failures = 0;

  void line(int id, const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << id << ". " << name << ": " << detail << std::endl;
    if (!ok) ++failures;
  }
};

// Criterion 1.
void example_replay(Report& report) {
  Instance inst = load("example.txt");
  auto start = Clock::now();
  CrmmResult r = solve_crmm(inst);
  double elapsed = ms_since(start);
  Matching m = parse_matching(inst, slurp(data("example_m.txt")));
  Matching mp = parse_matching(inst, slurp(data("example_mprime.txt")));
  auto v = first_violation(inst, mp);
  bool ok = r.signature.to_string() == "(3, 2)" && is_feasible(inst, r.matching) && is_feasible(inst, m) && v &&
            describe(inst, *v) == "class quota exceeded at p1 class {a1 a2 a3}" && elapsed < 10.0;
  std::ostringstream d;
  d << "signature " << r.signature.to_string() << ", M feasible, M' " << (v ? describe(inst, *v) : "feasible") << ", "
    << elapsed << " ms";
  report.line(1, "example instance replay", ok, d.str());
}

// Criterion 2.
void walkthrough(Report& report) {
  Instance inst = load("example.txt");
  RankMaximalSolver solver(inst);
  IterationRecord rec = solver.step();
  std::string text = format_iteration(solver.layout(), rec);
  const NetworkLayout& layout = solver.layout();
  auto deleted = [&](const std::string& tail, const std::string& head) {
    return std::any_of(rec.deleted_arcs.begin(), rec.deleted_arcs.end(),
                       [&](const Arc& a) { return layout.label(a.tail) == tail && layout.label(a.head) == head; });
  };
  int a2 = *inst.find(Side::applicant, "a2");
  int p5 = *inst.find(Side::post, "p5");
  bool pruned = rec.pruned_edges == std::vector<int>{*inst.edge_index(a2, p5)};
  bool ok = rec.flow_value == 3 && deleted("p1:a3", "p1:1") && deleted("p1:*", "p1:1") && pruned &&
            text == slurp(data("example_iteration1.txt"));
  report.line(2, "first iteration trace", ok,
              "flow " + std::to_string(rec.flow_value) + ", reverse and forward cut arcs into p1:1 deleted, (a2, p5) pruned, " +
                  (text == slurp(data("example_iteration1.txt")) ? "golden trace matches" : "golden trace differs"));
}

struct InvariantCounts {
  int iterations = 0;
  int preference_deleted = 0;
  int unfrozen = 0;
  int min_cut = 0;
  int one_sided = 0;
};

// Criteria 3 and 6. The line for 6 is printed later, in criterion order.
std::function<void(Report&)> deletion_line;

void crmm_suite(Report& report) {
  const int runs = 1000;
  int mismatches = 0;
  int infeasible = 0;
  InvariantCounts inv;
  auto start = Clock::now();
  for (std::uint64_t seed = 1; seed <= runs; ++seed) {
    Instance inst = small_instance(seed, false);
    CrmmResult r = solve_crmm(inst, seed % 2 ? NeighborOrder::ascending : NeighborOrder::descending);
    if (!is_feasible(inst, r.matching)) ++infeasible;
    if (!same(r.signature, oracle_rmm_signature(inst).first)) ++mismatches;
    std::vector<int> frozen;
    for (const IterationRecord& rec : r.trace.iterations) {
      ++inv.iterations;
      if (rec.preference_arc_deleted) ++inv.preference_deleted;
      if (!rec.min_cut_ok) ++inv.min_cut;
      inv.one_sided += rec.one_sided_deletion_failures;
      for (std::size_t j = 0; j < frozen.size(); ++j) {
        if (rec.rl_counts[j] != frozen[j]) ++inv.unfrozen;
      }
      frozen.push_back(rec.rl_counts[static_cast<std::size_t>(rec.rank - 1)]);
    }
  }
  double elapsed = ms_since(start);
  report.line(3, "rank-maximal vs oracle", mismatches == 0 && infeasible == 0 && elapsed < 60000.0,
              std::to_string(runs) + " instances, " + std::to_string(mismatches) + " signature mismatches, " +
                  std::to_string(infeasible) + " infeasible, " + std::to_string(static_cast<int>(elapsed)) + " ms");
  bool ok = inv.preference_deleted == 0 && inv.unfrozen == 0 && inv.min_cut == 0 && inv.one_sided == 0;
  deletion_line = [ok, inv](Report& later) {
    later.line(6, "deletion invariants", ok,
              std::to_string(inv.iterations) + " iterations; preference arcs deleted " +
                  std::to_string(inv.preference_deleted) + ", rank counts changed " + std::to_string(inv.unfrozen) +
                  ", min-cut failures " + std::to_string(inv.min_cut) + ", two-sided or no-sided cuts " +
                  std::to_string(inv.one_sided));
  };
}

void deletion_invariants(Report& report) {
  if (deletion_line) deletion_line(report);
  else report.line(6, "deletion invariants", false, "rank-maximal runs did not complete");
}

// Criterion 4.
void cpm_suite(Report& report) {
  const int runs = 1000;
  int verdict = 0;
  int not_popular = 0;
  int characterization = 0;
  int exists = 0;
  auto start = Clock::now();
  for (std::uint64_t seed = 1; seed <= runs; ++seed) {
    Instance inst = small_instance(seed, true);
    PopularResult r = solve_cpm(inst, seed % 2 ? NeighborOrder::ascending : NeighborOrder::descending);
    if (r.exists != oracle_popular(inst).exists) ++verdict;
    if (!r.exists) continue;
    ++exists;
    if (!oracle_is_popular(inst, r.matching)) ++not_popular;
    if (!verify_popular_characterization(inst, r.matching)) ++characterization;
  }
  double elapsed = ms_since(start);
  bool ok = verdict == 0 && not_popular == 0 && characterization == 0 && elapsed < 60000.0;
  report.line(4, "popular matching vs oracle", ok,
              std::to_string(runs) + " instances (" + std::to_string(exists) + " with a popular matching), " +
                  std::to_string(verdict) + " verdict mismatches, " + std::to_string(not_popular) + " beaten, " +
                  std::to_string(characterization) + " characterization failures, " +
                  std::to_string(static_cast<int>(elapsed)) + " ms");
}

// Criterion 5.
void invariance(Report& report) {
  int graphs = 0;
  int differing = 0;
  for (std::uint64_t seed = 1; graphs < 100 || seed <= 100; ++seed) {
    Instance inst = small_instance(seed + 1000, seed % 3 == 0);
    RankMaximalSolver solver(inst);
    while (!solver.done()) {
      IterationRecord rec = solver.step(NeighborOrder::ascending);
      FlowAssignment other = max_flow(solver.last_network(), NeighborOrder::descending);
      ++graphs;
      if (other.value != rec.flow_value || !(decompose(residual(solver.last_network(), other)) == rec.decomposition)) {
        ++differing;
      }
    }
  }
  report.line(5, "decomposition invariance", differing == 0,
              std::to_string(graphs) + " flow graphs, " + std::to_string(differing) + " with differing S/T/U");
}

// Criterion 7.
void hardness(Report& report) {
  auto f = [](int n, std::vector<std::array<int, 3>> clauses) {
    MonotoneFormula out;
    out.variables = n;
    out.clauses = std::move(clauses);
    return out;
  };
  std::vector<MonotoneFormula> set{
      parse_formula(slurp(data("one_clause.cnf"))),
      f(4, {{1, 2, 3}}),
      f(5, {{1, 2, 3}}),
      f(4, {{1, 2, 3}, {2, 3, 4}}),
      f(4, {{1, 2, 3}, {1, 2, 4}}),
      f(5, {{1, 2, 3}, {3, 4, 5}}),
      f(5, {{1, 2, 3}, {1, 4, 5}}),
      f(4, {{1, 2, 3}, {1, 2, 4}, {1, 3, 4}}),
      f(5, {{1, 2, 3}, {2, 3, 4}, {3, 4, 5}}),
      f(5, {{1, 2, 3}, {1, 4, 5}, {2, 4, 5}}),
      f(5, {{1, 2, 3}, {1, 2, 4}, {1, 2, 5}}),
      f(5, {{1, 2, 3}, {3, 4, 5}, {1, 2, 5}}),
      // Outside the n <= 5, m <= 3 range, where every formula is satisfiable:
      // all four triples of four variables admit no 1-in-3 assignment.
      f(4, {{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}}),
  };
  OracleOptions cap{1000};
  int disagreements = 0;
  int satisfiable = 0;
  auto start = Clock::now();
  for (const MonotoneFormula& formula : set) {
    bool sat = brute_force_1in3(formula).satisfiable;
    satisfiable += sat;
    Reduction r = reduce(formula);
    bool decision = oracle_decision(r.instance, r.target, cap);
    bool popular = oracle_popular(r.instance, cap).exists;
    bool perfect = oracle_max_cardinality(r.instance, cap) == r.instance.applicant_count();
    if (decision != sat || popular != sat || perfect != sat) ++disagreements;
  }
  double elapsed = ms_since(start);
  report.line(7, "hardness round trip", disagreements == 0 && elapsed < 300000.0,
              std::to_string(set.size()) + " formulas (" + std::to_string(satisfiable) + " satisfiable), " +
                  std::to_string(disagreements) + " disagreements, " + std::to_string(static_cast<int>(elapsed)) +
                  " ms");
}

// Criterion 8.
void scaling(Report& report) {
  std::vector<int> sizes{1000, 2000, 4000};
  std::vector<double> times;
  for (int edges : sizes) {
    Instance inst = scaling_instance(edges, 7);
    std::vector<double> runs;
    for (int rep = 0; rep < 5; ++rep) {
      auto start = Clock::now();
      CrmmResult r = solve_crmm(inst);
      runs.push_back(ms_since(start));
      if (r.matching.empty()) runs.back() = 1e9;
    }
    times.push_back(*std::min_element(runs.begin(), runs.end()));
  }
  double worst = 0;
  for (std::size_t i = 1; i < times.size(); ++i) worst = std::max(worst, times[i] / std::max(times[i - 1], 1e-3));
  std::ostringstream d;
  d.precision(3);
  d << "best of 5: ";
  for (std::size_t i = 0; i < sizes.size(); ++i) d << (i ? ", " : "") << "|E|=" << sizes[i] << " " << times[i] << " ms";
  d << "; worst doubling ratio " << worst;
  report.line(8, "running time under doubling", worst <= 5.0, d.str());
}

}  // namespace

int main() {
  Report report;
  std::vector<std::function<void(Report&)>> steps{example_replay, walkthrough, crmm_suite, cpm_suite,
                                                 invariance,   deletion_invariants, hardness, scaling};
  for (auto& step : steps) {
    try {
      step(report);
    } catch (const std::exception& e) {
      std::cout << "FAIL  unexpected exception: " << e.what() << std::endl;
      ++report.failures;
    }
  }
  std::cout << (report.failures == 0 ? "all criteria passed" : std::to_string(report.failures) + " criteria failed")
            << std::endl;
  return report.failures == 0 ? 0 : 1;
}
