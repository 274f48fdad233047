#pragma once

// Rank-maximal feasible matchings for laminar classifications on both sides.
//
// The working graph starts as the base network. Iteration k adds the
// surviving rank-k preference arcs, computes a max-flow, replaces the graph by
// its residual graph, deletes every residual arc from T u U into S, and drops
// higher-rank edges that can no longer be used. After the last rank, the
// matching is read off the R -> L preference arcs.

#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "flow.hpp"
#include "flow_network.hpp"
#include "instance.hpp"
#include "validate.hpp"

namespace lamatch {

struct IterationRecord {
  int rank = 0;
  std::vector<int> added_edges;    // instance edge ids that got an L -> R arc
  int flow_value = 0;
  Decomposition decomposition;
  std::vector<Arc> deleted_arcs;   // residual arcs removed from T u U into S
  std::vector<int> pruned_edges;   // higher-rank instance edges dropped
  std::vector<int> rl_counts;      // R -> L arcs per rank (index 0 = rank 1) after deletion
  bool min_cut_ok = true;
  bool preference_arc_deleted = false;
  int one_sided_deletion_failures = 0;  // L -> R arcs on a flow path whose two sides are not cut exactly once
};

struct CrmmTrace {
  std::vector<IterationRecord> iterations;
};

struct CrmmResult {
  Matching matching;
  Signature signature;
  CrmmTrace trace;
};

/// Higher-rank edges that can no longer be matched: (a, p) with rank above
/// `rank` is dropped if C_a^p lies in T u U or C_p^a lies in S u U.
inline std::vector<int> prune_higher_rank(const NetworkLayout& layout, std::vector<bool>& alive, int rank,
                                          const Decomposition& d) {
  std::vector<int> pruned;
  const auto edges = layout.instance().edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!alive[e] || edges[e].rank <= rank) continue;
    int l = layout.left_leaf(static_cast<int>(e));
    int r = layout.right_leaf(static_cast<int>(e));
    if (!d.in(l, Part::S) || d.in(r, Part::S) || d.in(r, Part::U)) {
      alive[e] = false;
      pruned.push_back(static_cast<int>(e));
    }
  }
  return pruned;
}

/// Removes every arc with tail in T u U and head in S. Returns the new graph
/// and the removed arcs in graph order.
inline std::pair<FlowGraph, std::vector<Arc>> delete_cut_arcs(const FlowGraph& g, const Decomposition& d) {
  std::vector<bool> remove(g.arc_count(), false);
  std::vector<Arc> removed;
  auto arcs = g.arcs();
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    if (!d.in(arcs[i].tail, Part::S) && d.in(arcs[i].head, Part::S)) {
      remove[i] = true;
      removed.push_back(arcs[i]);
    }
  }
  return {g.without(remove), std::move(removed)};
}

inline std::vector<int> rl_counts(const FlowGraph& g, int max_rank) {
  std::vector<int> counts(static_cast<std::size_t>(max_rank), 0);
  const auto edges = g.layout().instance().edges();
  for (const Arc& a : g.arcs()) {
    if (g.is_rl(a)) ++counts[static_cast<std::size_t>(edges[static_cast<std::size_t>(a.edge)].rank - 1)];
  }
  return counts;
}

namespace detail {

// Splits an integral flow into unit s-t paths, each a list of arc indices.
// Cycles met along the way are cancelled.
inline std::vector<std::vector<int>> unit_paths(const FlowGraph& g, const FlowAssignment& f) {
  auto arcs = g.arcs();
  std::vector<int> left = f.flow;
  std::vector<std::vector<int>> out_arcs(static_cast<std::size_t>(g.node_count()));
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    if (left[i] > 0) out_arcs[static_cast<std::size_t>(arcs[i].tail)].push_back(static_cast<int>(i));
  }
  auto next_arc = [&](int v) {
    for (int i : out_arcs[static_cast<std::size_t>(v)]) {
      if (left[static_cast<std::size_t>(i)] > 0) return i;
    }
    return -1;
  };
  std::vector<std::vector<int>> paths;
  std::vector<int> position(static_cast<std::size_t>(g.node_count()), -1);
  for (int unit = 0; unit < f.value; ++unit) {
    std::vector<int> path;
    std::vector<int> visited{NetworkLayout::source};
    position[NetworkLayout::source] = 0;
    int v = NetworkLayout::source;
    while (v != NetworkLayout::sink) {
      int i = next_arc(v);
      if (i < 0) break;  // not a valid flow
      path.push_back(i);
      v = arcs[static_cast<std::size_t>(i)].head;
      if (position[static_cast<std::size_t>(v)] >= 0) {
        auto from = static_cast<std::size_t>(position[static_cast<std::size_t>(v)]);
        for (std::size_t k = from; k < path.size(); ++k) --left[static_cast<std::size_t>(path[k])];
        for (std::size_t k = from + 1; k < visited.size(); ++k) position[static_cast<std::size_t>(visited[k])] = -1;
        path.resize(from);
        visited.resize(from + 1);
        continue;
      }
      position[static_cast<std::size_t>(v)] = static_cast<int>(visited.size());
      visited.push_back(v);
    }
    for (int x : visited) position[static_cast<std::size_t>(x)] = -1;
    for (int i : path) --left[static_cast<std::size_t>(i)];
    paths.push_back(std::move(path));
  }
  return paths;
}

inline bool touches_any(const std::vector<Arc>& deleted, std::span<const Arc> arcs, std::span<const int> segment) {
  for (const Arc& d : deleted) {
    for (int i : segment) {
      const Arc& a = arcs[static_cast<std::size_t>(i)];
      if ((a.tail == d.tail && a.head == d.head) || (a.tail == d.head && a.head == d.tail)) return true;
    }
  }
  return false;
}

}  // namespace detail

/// Steps through the ranks one at a time so callers can inspect the
/// intermediate graphs.
class RankMaximalSolver {
 public:
  explicit RankMaximalSolver(const Instance& instance)
      : graph_(build_base_network(instance)),
        alive_(instance.edges().size(), true),
        max_rank_(instance.max_rank()) {}

  bool done() const noexcept { return rank_ >= max_rank_; }
  int rank() const noexcept { return rank_; }
  const NetworkLayout& layout() const noexcept { return graph_.layout(); }

  /// Working graph after the last completed iteration.
  const FlowGraph& graph() const noexcept { return graph_; }
  /// Network of the last iteration before its max-flow, and that flow.
  const FlowGraph& last_network() const noexcept { return *last_network_; }
  const FlowAssignment& last_flow() const noexcept { return last_flow_; }
  const std::vector<bool>& alive_edges() const noexcept { return alive_; }

  IterationRecord step(NeighborOrder order = NeighborOrder::ascending) {
    ++rank_;
    IterationRecord rec;
    rec.rank = rank_;
    const NetworkLayout& lay = graph_.layout();
    const auto edges = lay.instance().edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (alive_[e] && edges[e].rank == rank_) rec.added_edges.push_back(static_cast<int>(e));
    }
    FlowGraph network = graph_;
    add_preference_arcs(network, rec.added_edges);

    FlowAssignment f = max_flow(network, order);
    rec.flow_value = f.value;
    FlowGraph res = residual(network, f);
    rec.decomposition = decompose(res);
    rec.min_cut_ok = min_cut_check(network, f, rec.decomposition) &&
                     cut_capacity(network, rec.decomposition) == f.value;

    auto [next, deleted] = delete_cut_arcs(res, rec.decomposition);
    for (const Arc& a : deleted) {
      if (a.kind == ArcKind::preference) rec.preference_arc_deleted = true;
    }
    auto arcs = network.arcs();
    for (const std::vector<int>& path : detail::unit_paths(network, f)) {
      std::span<const int> whole(path);
      for (std::size_t k = 0; k < path.size(); ++k) {
        if (!network.is_lr(arcs[static_cast<std::size_t>(path[k])])) continue;
        bool app = detail::touches_any(deleted, arcs, whole.first(k));
        bool post = detail::touches_any(deleted, arcs, whole.subspan(k + 1));
        if (app == post) ++rec.one_sided_deletion_failures;
      }
    }
    rec.deleted_arcs = std::move(deleted);
    rec.pruned_edges = prune_higher_rank(lay, alive_, rank_, rec.decomposition);
    rec.rl_counts = rl_counts(next, max_rank_);

    last_network_ = std::make_unique<FlowGraph>(std::move(network));
    last_flow_ = std::move(f);
    graph_ = std::move(next);
    return rec;
  }

  Matching matching() const { return extract_matching(graph_); }

 private:
  FlowGraph graph_;
  std::unique_ptr<FlowGraph> last_network_;
  FlowAssignment last_flow_;
  std::vector<bool> alive_;
  int max_rank_ = 0;
  int rank_ = 0;
};

/// Throws Error(invalid_instance) or Error(non_laminar).
inline CrmmResult solve_crmm(const Instance& instance, NeighborOrder order = NeighborOrder::ascending) {
  require_valid(instance);
  RankMaximalSolver solver(instance);
  CrmmResult out;
  while (!solver.done()) out.trace.iterations.push_back(solver.step(order));
  out.matching = solver.matching();
  out.signature = signature_of(instance, out.matching);
  return out;
}

/// Flow-invariant parts of one iteration: added edges, flow value, S/T/U,
/// deleted arcs, pruned edges and the R -> L counts.
inline std::string format_iteration(const NetworkLayout& layout, const IterationRecord& rec) {
  const Instance& inst = layout.instance();
  auto edge_name = [&](int e) {
    const Edge& edge = inst.edges()[static_cast<std::size_t>(e)];
    return "(" + inst.applicant(edge.applicant).name + ", " + inst.post(edge.post).name + ")";
  };
  auto join_edges = [&](const std::vector<int>& es) {
    std::string s;
    for (int e : es) s += (s.empty() ? "" : " ") + edge_name(e);
    return s.empty() ? std::string("-") : s;
  };
  auto join_nodes = [&](Part p) {
    std::string s;
    for (int v : rec.decomposition.nodes(p)) s += (s.empty() ? "" : " ") + layout.label(v);
    return s.empty() ? std::string("-") : s;
  };
  std::vector<Arc> deleted = rec.deleted_arcs;
  std::sort(deleted.begin(), deleted.end(),
            [](const Arc& x, const Arc& y) { return std::pair(x.tail, x.head) < std::pair(y.tail, y.head); });

  std::ostringstream out;
  out << "iteration " << rec.rank << '\n';
  out << "  added: " << join_edges(rec.added_edges) << '\n';
  out << "  flow = " << rec.flow_value << '\n';
  out << "  S: " << join_nodes(Part::S) << '\n';
  out << "  T: " << join_nodes(Part::T) << '\n';
  out << "  U: " << join_nodes(Part::U) << '\n';
  out << "  deleted:";
  if (deleted.empty()) out << " -";
  for (const Arc& a : deleted) out << "\n    " << layout.label(a.tail) << " -> " << layout.label(a.head);
  out << '\n';
  out << "  pruned: " << join_edges(rec.pruned_edges) << '\n';
  out << "  rl counts = " << Signature{rec.rl_counts}.to_string() << '\n';
  return out.str();
}

inline std::string format_trace(const Instance& instance, const CrmmTrace& trace) {
  NetworkLayout layout(instance);
  std::string out;
  for (const IterationRecord& rec : trace.iterations) out += format_iteration(layout, rec);
  return out;
}

}  // namespace lamatch
