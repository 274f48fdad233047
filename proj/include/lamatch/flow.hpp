#pragma once

// Max-flow, residual graphs and the S/T/U decomposition of a residual graph:
//   S = nodes reachable from s, T = nodes that can reach t, U = the rest.
// For a maximum flow the three sets partition the nodes and do not depend on
// which maximum flow was found.

#include <algorithm>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "flow_network.hpp"
#include "instance.hpp"

namespace lamatch {

/// Order in which the out-arcs of a node are explored: by head node id.
enum class NeighborOrder { ascending, descending };

struct FlowAssignment {
  std::vector<int> flow;  // per arc of the graph it was computed on
  int value = 0;
};

namespace detail {

/// Residual network with paired arcs: 2i is arc i, 2i + 1 its reverse.
class ResidualNetwork {
 public:
  ResidualNetwork(const FlowGraph& g, NeighborOrder order)
      : n_(g.node_count()), head_(2 * g.arc_count()), cap_(2 * g.arc_count()), adj_(static_cast<std::size_t>(n_)) {
    auto arcs = g.arcs();
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      head_[2 * i] = arcs[i].head;
      cap_[2 * i] = arcs[i].capacity;
      head_[2 * i + 1] = arcs[i].tail;
      cap_[2 * i + 1] = 0;
      adj_[static_cast<std::size_t>(arcs[i].tail)].push_back(static_cast<int>(2 * i));
      adj_[static_cast<std::size_t>(arcs[i].head)].push_back(static_cast<int>(2 * i + 1));
    }
    for (auto& list : adj_) {
      std::stable_sort(list.begin(), list.end(), [&](int x, int y) {
        int hx = head_[static_cast<std::size_t>(x)];
        int hy = head_[static_cast<std::size_t>(y)];
        return order == NeighborOrder::ascending ? hx < hy : hx > hy;
      });
    }
  }

  /// Dinic: repeated breadth-first level graphs, each saturated by
  /// depth-first blocking flows along shortest augmenting paths.
  int run(int s, int t) {
    int total = 0;
    level_.assign(static_cast<std::size_t>(n_), -1);
    next_.assign(static_cast<std::size_t>(n_), 0);
    while (bfs(s, t)) {
      std::fill(next_.begin(), next_.end(), 0);
      while (int pushed = augment(s, t)) total += pushed;
    }
    return total;
  }

  int reverse_capacity(std::size_t arc) const { return cap_[2 * arc + 1]; }

 private:
  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<int> queue{s};
    level_[static_cast<std::size_t>(s)] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      int u = queue[qi];
      for (int id : adj_[static_cast<std::size_t>(u)]) {
        int v = head_[static_cast<std::size_t>(id)];
        if (cap_[static_cast<std::size_t>(id)] > 0 && level_[static_cast<std::size_t>(v)] < 0) {
          level_[static_cast<std::size_t>(v)] = level_[static_cast<std::size_t>(u)] + 1;
          queue.push_back(v);
        }
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  // Iterative DFS for one augmenting path in the level graph; returns the
  // amount pushed (0 when the level graph is blocked).
  int augment(int s, int t) {
    std::vector<int> path;  // residual arc ids
    int u = s;
    while (true) {
      if (u == t) {
        int bottleneck = std::numeric_limits<int>::max();
        for (int id : path) bottleneck = std::min(bottleneck, cap_[static_cast<std::size_t>(id)]);
        for (int id : path) {
          cap_[static_cast<std::size_t>(id)] -= bottleneck;
          cap_[static_cast<std::size_t>(id ^ 1)] += bottleneck;
        }
        return bottleneck;
      }
      auto& list = adj_[static_cast<std::size_t>(u)];
      int& pos = next_[static_cast<std::size_t>(u)];
      bool advanced = false;
      for (; pos < static_cast<int>(list.size()); ++pos) {
        int id = list[static_cast<std::size_t>(pos)];
        int v = head_[static_cast<std::size_t>(id)];
        if (cap_[static_cast<std::size_t>(id)] > 0 &&
            level_[static_cast<std::size_t>(v)] == level_[static_cast<std::size_t>(u)] + 1) {
          path.push_back(id);
          u = v;
          advanced = true;
          break;
        }
      }
      if (advanced) continue;
      if (path.empty()) return 0;
      // Dead end: retreat and skip the arc that led here.
      level_[static_cast<std::size_t>(u)] = -1;
      int back = path.back();
      path.pop_back();
      u = head_[static_cast<std::size_t>(back ^ 1)];
      ++next_[static_cast<std::size_t>(u)];
    }
  }

  int n_;
  std::vector<int> head_;
  std::vector<int> cap_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> level_;
  std::vector<int> next_;
};

}  // namespace detail

/// Integral maximum s-t flow. Deterministic for a given neighbor order.
inline FlowAssignment max_flow(const FlowGraph& g, NeighborOrder order = NeighborOrder::ascending) {
  detail::ResidualNetwork net(g, order);
  FlowAssignment f;
  f.value = net.run(NetworkLayout::source, NetworkLayout::sink);
  f.flow.resize(g.arc_count());
  for (std::size_t i = 0; i < g.arc_count(); ++i) f.flow[i] = net.reverse_capacity(i);
  return f;
}

/// Standard residual graph: leftover capacity forward, flow backward, parallel
/// contributions merged, zero-capacity arcs dropped. Provenance is kept, so a
/// preference arc carrying flow comes back as an R -> L arc.
inline FlowGraph residual(const FlowGraph& g, const FlowAssignment& f) {
  FlowGraph out(g.shared_layout());
  auto arcs = g.arcs();
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const Arc& a = arcs[i];
    int used = f.flow[i];
    if (a.capacity - used > 0) out.add_capacity(Arc{a.tail, a.head, a.capacity - used, a.kind, a.edge});
    if (used > 0) out.add_capacity(Arc{a.head, a.tail, used, a.kind, a.edge});
  }
  return out;
}

enum class Part : std::uint8_t { S, T, U };

struct Decomposition {
  std::vector<Part> part;  // per node

  bool in(int node, Part p) const { return part[static_cast<std::size_t>(node)] == p; }

  std::vector<int> nodes(Part p) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < part.size(); ++i) {
      if (part[i] == p) out.push_back(static_cast<int>(i));
    }
    return out;
  }

  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

/// S/T/U of a residual graph. Throws Error(source_reaches_sink) when the
/// flow the graph came from was not maximum.
inline Decomposition decompose(const FlowGraph& residual_graph) {
  const int n = residual_graph.node_count();
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> in(static_cast<std::size_t>(n));
  for (const Arc& a : residual_graph.arcs()) {
    if (a.capacity <= 0) continue;
    out[static_cast<std::size_t>(a.tail)].push_back(a.head);
    in[static_cast<std::size_t>(a.head)].push_back(a.tail);
  }
  auto reach = [&](int start, const std::vector<std::vector<int>>& adj) {
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<int> stack{start};
    seen[static_cast<std::size_t>(start)] = true;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : adj[static_cast<std::size_t>(u)]) {
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = true;
          stack.push_back(v);
        }
      }
    }
    return seen;
  };
  auto from_s = reach(NetworkLayout::source, out);
  auto to_t = reach(NetworkLayout::sink, in);
  if (from_s[NetworkLayout::sink]) {
    throw Error(ErrorKind::source_reaches_sink, "residual graph still has an s-t path");
  }
  Decomposition d;
  d.part.resize(static_cast<std::size_t>(n), Part::U);
  for (int v = 0; v < n; ++v) {
    if (from_s[static_cast<std::size_t>(v)]) d.part[static_cast<std::size_t>(v)] = Part::S;
    else if (to_t[static_cast<std::size_t>(v)]) d.part[static_cast<std::size_t>(v)] = Part::T;
  }
  return d;
}

/// Every arc leaving S is saturated and every arc entering S carries no flow.
inline bool min_cut_check(const FlowGraph& g, const FlowAssignment& f, const Decomposition& d) {
  auto arcs = g.arcs();
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    bool tail_s = d.in(arcs[i].tail, Part::S);
    bool head_s = d.in(arcs[i].head, Part::S);
    if (tail_s && !head_s && f.flow[i] != arcs[i].capacity) return false;
    if (!tail_s && head_s && f.flow[i] != 0) return false;
  }
  return true;
}

/// Capacity of the cut (S, T u U) in g.
inline long long cut_capacity(const FlowGraph& g, const Decomposition& d) {
  long long total = 0;
  for (const Arc& a : g.arcs()) {
    if (d.in(a.tail, Part::S) && !d.in(a.head, Part::S)) total += a.capacity;
  }
  return total;
}

/// Pairs (a, p) whose preference arc currently points R -> L.
inline Matching extract_matching(const FlowGraph& g) {
  std::vector<Pair> pairs;
  const Instance& inst = g.layout().instance();
  for (const Arc& a : g.arcs()) {
    if (g.is_rl(a)) {
      const Edge& e = inst.edges()[static_cast<std::size_t>(a.edge)];
      pairs.push_back(Pair{e.applicant, e.post});
    }
  }
  return Matching(std::move(pairs));
}

inline std::string arc_tag(const FlowGraph& g, const Arc& a) {
  switch (a.kind) {
    case ArcKind::source: return "source";
    case ArcKind::sink: return "sink";
    case ArcKind::tree: return "tree";
    case ArcKind::preference: {
      int rank = g.layout().instance().edges()[static_cast<std::size_t>(a.edge)].rank;
      return (g.is_lr(a) ? "lr:" : "rl:") + std::to_string(rank);
    }
  }
  return "?";
}

inline std::string format_arc(const FlowGraph& g, const Arc& a) {
  return g.layout().label(a.tail) + " -> " + g.layout().label(a.head);
}

/// One line per arc: `src -> dst cap=<c> flow=<f> tag=<provenance>`.
inline std::string dump(const FlowGraph& g, const FlowAssignment* f = nullptr) {
  std::ostringstream out;
  auto arcs = g.arcs();
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    out << format_arc(g, arcs[i]) << " cap=" << arcs[i].capacity << " flow=" << (f ? f->flow[i] : 0)
        << " tag=" << arc_tag(g, arcs[i]) << '\n';
  }
  return out.str();
}

}  // namespace lamatch
