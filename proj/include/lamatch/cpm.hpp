#pragma once

// Popular matchings for many-to-one instances with laminar classifications on
// the posts. Every applicant gets a private last-resort post at the end of its
// list, so "unmatched" becomes an ordinary worst choice. One max-flow on the
// rank-1 network fixes f(a) and s(a); a second max-flow over f- and s-arcs
// gives a popular matching exactly when it matches every applicant.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flow.hpp"
#include "flow_network.hpp"
#include "instance.hpp"
#include "validate.hpp"

namespace lamatch {

/// Copy of `instance` with one quota-1 post per applicant appended as that
/// applicant's last rank group. The new posts get ids post_count() + a.
inline Instance add_last_resorts(const Instance& instance) {
  require_many_to_one(instance);
  for (const ClassDef& c : instance.classes()) {
    if (c.owner_side == Side::applicant) {
      throw Error(ErrorKind::not_many_to_one, "applicant classes are not supported for popular matchings");
    }
  }
  Instance out = instance;
  const int base = instance.post_count();
  for (int a = 0; a < instance.applicant_count(); ++a) {
    std::string name = "last_" + instance.applicant(a).name;
    while (out.find(Side::post, name) || out.find(Side::applicant, name)) name = "_" + name;
    out.add_post(name, 1);
  }
  for (int a = 0; a < instance.applicant_count(); ++a) {
    auto groups = instance.preferences(a);
    groups.push_back({base + a});
    out.set_preferences(a, std::move(groups));
  }
  return out;
}

struct FsSets {
  std::vector<std::vector<int>> first;   // f(a): rank-1 posts
  std::vector<std::vector<int>> second;  // s(a); empty when C_a* is not in S
};

/// Outcome of the rank-1 phase on an instance that already has last resorts.
struct RankOnePhase {
  FsSets sets;
  int flow_value = 0;
  Decomposition decomposition;
  std::shared_ptr<FlowGraph> graph;  // residual with (T u U, S) arcs removed
};

inline RankOnePhase compute_fs_sets(const Instance& augmented, NeighborOrder order = NeighborOrder::ascending) {
  RankOnePhase out;
  FlowGraph h1 = build_base_network(augmented);
  const NetworkLayout& lay = h1.layout();
  const auto edges = augmented.edges();
  std::vector<int> rank_one;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].rank == 1) rank_one.push_back(static_cast<int>(e));
  }
  add_preference_arcs(h1, rank_one);
  FlowAssignment f = max_flow(h1, order);
  out.flow_value = f.value;
  FlowGraph res = residual(h1, f);
  out.decomposition = decompose(res);
  const Decomposition& d = out.decomposition;

  std::vector<bool> remove(res.arc_count(), false);
  auto arcs = res.arcs();
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    remove[i] = !d.in(arcs[i].tail, Part::S) && d.in(arcs[i].head, Part::S);
  }
  out.graph = std::make_shared<FlowGraph>(res.without(remove));

  const int n = augmented.applicant_count();
  out.sets.first.resize(static_cast<std::size_t>(n));
  out.sets.second.resize(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    const auto& groups = augmented.preferences(a);
    out.sets.first[static_cast<std::size_t>(a)] = groups.front();
    if (!d.in(lay.root(Side::applicant, a), Part::S)) continue;
    for (const auto& group : groups) {
      std::vector<int> in_t;
      for (int p : group) {
        int e = *augmented.edge_index(a, p);
        if (d.in(lay.right_leaf(e), Part::T)) in_t.push_back(p);
      }
      if (!in_t.empty()) {
        out.sets.second[static_cast<std::size_t>(a)] = std::move(in_t);
        break;
      }
    }
  }
  return out;
}

struct PopularResult {
  bool exists = false;
  Matching matching;             // pairs of the original instance
  std::vector<int> unmatched;    // applicants assigned to their last resort
  Signature signature;           // over the original ranks
  int rank_one_count = 0;
  int rank_one_flow = 0;         // value of the rank-1 max-flow
  Matching augmented_matching;   // including last-resort pairs
  FsSets sets;                   // indexed by applicant; post ids of the augmented instance
};

/// Throws Error(invalid_instance), Error(non_laminar) or Error(not_many_to_one).
inline PopularResult solve_cpm(const Instance& instance, NeighborOrder order = NeighborOrder::ascending) {
  require_valid(instance);
  Instance augmented = add_last_resorts(instance);
  RankOnePhase phase = compute_fs_sets(augmented, order);
  FlowGraph h2 = *phase.graph;
  const NetworkLayout& lay = h2.layout();
  std::vector<int> extra;
  for (int a = 0; a < augmented.applicant_count(); ++a) {
    for (int p : phase.sets.second[static_cast<std::size_t>(a)]) {
      int e = *augmented.edge_index(a, p);
      int l = lay.left_leaf(e);
      int r = lay.right_leaf(e);
      if (!h2.find_arc(l, r) && !h2.find_arc(r, l)) extra.push_back(e);
    }
  }
  add_preference_arcs(h2, extra);
  FlowAssignment f2 = max_flow(h2, order);
  Matching m = extract_matching(residual(h2, f2));

  PopularResult out;
  out.rank_one_flow = phase.flow_value;
  out.sets = std::move(phase.sets);
  out.augmented_matching = m;
  out.exists = static_cast<int>(m.size()) == augmented.applicant_count();
  if (!out.exists) return out;
  std::vector<Pair> real;
  for (const Pair& pr : m.pairs()) {
    if (pr.post >= instance.post_count()) out.unmatched.push_back(pr.applicant);
    else real.push_back(pr);
  }
  out.matching = Matching(std::move(real));
  out.signature = signature_of(instance, out.matching);
  out.rank_one_count = out.signature.counts.empty() ? 0 : out.signature.counts.front();
  return out;
}

/// The structural test for popularity: M restricted to rank-1 edges is a
/// maximum rank-1 flow, and every applicant sits in f(a) or s(a). Unmatched
/// applicants of `m` count as assigned to their last resort.
inline bool verify_popular_characterization(const Instance& instance, const Matching& m) {
  Instance augmented = add_last_resorts(instance);
  RankOnePhase phase = compute_fs_sets(augmented);
  std::vector<int> post_of(static_cast<std::size_t>(instance.applicant_count()), -1);
  for (const Pair& pr : m.pairs()) {
    if (post_of[static_cast<std::size_t>(pr.applicant)] >= 0) return false;
    post_of[static_cast<std::size_t>(pr.applicant)] = pr.post;
  }
  int rank_one = 0;
  for (int a = 0; a < instance.applicant_count(); ++a) {
    int p = post_of[static_cast<std::size_t>(a)];
    if (p < 0) p = instance.post_count() + a;
    auto rank = augmented.rank_of(a, p);
    if (!rank) return false;
    if (*rank == 1) ++rank_one;
    const auto& fa = phase.sets.first[static_cast<std::size_t>(a)];
    const auto& sa = phase.sets.second[static_cast<std::size_t>(a)];
    if (std::find(fa.begin(), fa.end(), p) == fa.end() && std::find(sa.begin(), sa.end(), p) == sa.end()) {
      return false;
    }
  }
  return rank_one == phase.flow_value;
}

}  // namespace lamatch
