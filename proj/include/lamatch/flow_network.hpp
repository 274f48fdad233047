#pragma once

// The classification flow network. Nodes are the source, the sink and one
// node per class of every classification tree. Applicant trees hang off the
// source with arcs directed parent -> child; post trees drain into the sink
// with arcs directed child -> parent. Preference arcs join an applicant leaf
// C_a^p (side L) to the post leaf C_p^a (side R).
//
// A FlowGraph is a plain capacitated digraph over a shared, immutable
// NetworkLayout. The solvers evolve it by replacing it with its residual
// graph and deleting arcs, so the same type represents H_k, H_k(f_k) and H'_k.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "classification_tree.hpp"
#include "error.hpp"
#include "instance.hpp"

namespace lamatch {

enum class NodeKind : std::uint8_t { source, sink, applicant_class, post_class };

struct FlowNode {
  NodeKind kind = NodeKind::source;
  int owner = -1;      // applicant or post id for class nodes
  int tree_node = -1;  // index into the owner's ClassificationTree
};

class NetworkLayout {
 public:
  static constexpr int source = 0;
  static constexpr int sink = 1;

  /// Throws Error(non_laminar) if any vertex has a non-laminar classification.
  explicit NetworkLayout(Instance instance) : instance_(std::move(instance)) {
    nodes_.push_back(FlowNode{NodeKind::source, -1, -1});
    nodes_.push_back(FlowNode{NodeKind::sink, -1, -1});
    for (Side side : {Side::applicant, Side::post}) {
      auto& trees = side == Side::applicant ? applicant_trees_ : post_trees_;
      auto& base = side == Side::applicant ? applicant_base_ : post_base_;
      NodeKind kind = side == Side::applicant ? NodeKind::applicant_class : NodeKind::post_class;
      for (int u = 0; u < instance_.count(side); ++u) {
        trees.push_back(build_tree(instance_, side, u));
        base.push_back(static_cast<int>(nodes_.size()));
        for (std::size_t i = 0; i < trees.back().nodes.size(); ++i) {
          nodes_.push_back(FlowNode{kind, u, static_cast<int>(i)});
        }
      }
    }

    // Leaf lookup: edges are grouped by applicant in N(a) order, and the
    // position of a inside N(p) comes from post_pos.
    const auto edges = instance_.edges();
    left_leaf_.resize(edges.size());
    right_leaf_.resize(edges.size());
    std::vector<int> app_seen(static_cast<std::size_t>(instance_.applicant_count()), 0);
    std::vector<std::unordered_map<int, int>> post_pos(static_cast<std::size_t>(instance_.post_count()));
    for (int p = 0; p < instance_.post_count(); ++p) {
      const auto& n = instance_.neighbors(Side::post, p);
      for (std::size_t i = 0; i < n.size(); ++i) post_pos[static_cast<std::size_t>(p)][n[i]] = static_cast<int>(i);
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const Edge& edge = edges[e];
      int a_pos = app_seen[static_cast<std::size_t>(edge.applicant)]++;
      int p_pos = post_pos[static_cast<std::size_t>(edge.post)].at(edge.applicant);
      const auto& at = applicant_trees_[static_cast<std::size_t>(edge.applicant)];
      const auto& pt = post_trees_[static_cast<std::size_t>(edge.post)];
      left_leaf_[e] = applicant_base_[static_cast<std::size_t>(edge.applicant)] +
                      at.leaf_index[static_cast<std::size_t>(a_pos)];
      right_leaf_[e] = post_base_[static_cast<std::size_t>(edge.post)] +
                       pt.leaf_index[static_cast<std::size_t>(p_pos)];
    }
    leaf_edge_.assign(nodes_.size(), -1);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      leaf_edge_[static_cast<std::size_t>(left_leaf_[e])] = static_cast<int>(e);
      leaf_edge_[static_cast<std::size_t>(right_leaf_[e])] = static_cast<int>(e);
    }
  }

  const Instance& instance() const noexcept { return instance_; }
  int node_count() const noexcept { return static_cast<int>(nodes_.size()); }
  const FlowNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }

  const ClassificationTree& tree(Side side, int owner) const {
    return (side == Side::applicant ? applicant_trees_ : post_trees_).at(static_cast<std::size_t>(owner));
  }

  int node_id(Side side, int owner, int tree_node) const {
    return (side == Side::applicant ? applicant_base_ : post_base_).at(static_cast<std::size_t>(owner)) + tree_node;
  }

  int root(Side side, int owner) const { return node_id(side, owner, ClassificationTree::root); }

  /// C_a^p for the instance edge (a, p).
  int left_leaf(int edge) const { return left_leaf_.at(static_cast<std::size_t>(edge)); }
  /// C_p^a for the instance edge (a, p).
  int right_leaf(int edge) const { return right_leaf_.at(static_cast<std::size_t>(edge)); }

  bool is_left_leaf(int id) const {
    const FlowNode& n = node(id);
    return n.kind == NodeKind::applicant_class && tree(Side::applicant, n.owner).is_leaf(n.tree_node);
  }
  bool is_right_leaf(int id) const {
    const FlowNode& n = node(id);
    return n.kind == NodeKind::post_class && tree(Side::post, n.owner).is_leaf(n.tree_node);
  }

  /// Instance edge whose leaf this is, or -1.
  int leaf_edge(int id) const { return leaf_edge_.at(static_cast<std::size_t>(id)); }

  /// Tree parent as a flow node id; -1 for roots, the source and the sink.
  int tree_parent(int id) const {
    const FlowNode& n = node(id);
    if (n.kind == NodeKind::source || n.kind == NodeKind::sink) return -1;
    Side side = n.kind == NodeKind::applicant_class ? Side::applicant : Side::post;
    int par = tree(side, n.owner).nodes[static_cast<std::size_t>(n.tree_node)].parent;
    return par < 0 ? -1 : node_id(side, n.owner, par);
  }

  /// "s", "t", "a1:*" (root), "p1:2" (second class of p1), "p1:a3" (leaf).
  std::string label(int id) const {
    const FlowNode& n = node(id);
    if (n.kind == NodeKind::source) return "s";
    if (n.kind == NodeKind::sink) return "t";
    Side side = n.kind == NodeKind::applicant_class ? Side::applicant : Side::post;
    const TreeNode& tn = tree(side, n.owner).nodes[static_cast<std::size_t>(n.tree_node)];
    std::string out = instance_.vertex(side, n.owner).name + ":";
    if (n.tree_node == ClassificationTree::root) return out + "*";
    if (tn.leaf_of >= 0) return out + instance_.vertex(opposite(side), tn.leaf_of).name;
    return out + std::to_string(tn.user_class);
  }

 private:
  Instance instance_;
  std::vector<FlowNode> nodes_;
  std::vector<ClassificationTree> applicant_trees_;
  std::vector<ClassificationTree> post_trees_;
  std::vector<int> applicant_base_;
  std::vector<int> post_base_;
  std::vector<int> left_leaf_;
  std::vector<int> right_leaf_;
  std::vector<int> leaf_edge_;
};

enum class ArcKind : std::uint8_t { source, sink, tree, preference };

struct Arc {
  int tail = 0;
  int head = 0;
  int capacity = 0;
  ArcKind kind = ArcKind::tree;
  int edge = -1;  // instance edge for preference arcs
};

class FlowGraph {
 public:
  explicit FlowGraph(std::shared_ptr<const NetworkLayout> layout) : layout_(std::move(layout)) {}

  const NetworkLayout& layout() const noexcept { return *layout_; }
  const std::shared_ptr<const NetworkLayout>& shared_layout() const noexcept { return layout_; }
  int node_count() const noexcept { return layout_->node_count(); }

  std::span<const Arc> arcs() const noexcept { return arcs_; }
  std::size_t arc_count() const noexcept { return arcs_.size(); }

  std::optional<int> find_arc(int tail, int head) const {
    auto it = index_.find(key(tail, head));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Appends an arc. Throws Error(duplicate_arc) if tail -> head already exists.
  int add_arc(const Arc& arc) {
    if (!index_.emplace(key(arc.tail, arc.head), static_cast<int>(arcs_.size())).second) {
      throw Error(ErrorKind::duplicate_arc, layout_->label(arc.tail) + " -> " + layout_->label(arc.head));
    }
    arcs_.push_back(arc);
    return static_cast<int>(arcs_.size()) - 1;
  }

  /// Adds capacity to tail -> head, creating the arc if needed.
  void add_capacity(const Arc& arc) {
    auto [it, inserted] = index_.emplace(key(arc.tail, arc.head), static_cast<int>(arcs_.size()));
    if (inserted) {
      arcs_.push_back(arc);
    } else {
      arcs_[static_cast<std::size_t>(it->second)].capacity += arc.capacity;
    }
  }

  /// Copy without the arcs flagged in `remove`.
  FlowGraph without(const std::vector<bool>& remove) const {
    FlowGraph out(layout_);
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
      if (!remove[i]) out.add_arc(arcs_[i]);
    }
    return out;
  }

  bool is_lr(const Arc& arc) const { return arc.kind == ArcKind::preference && layout_->is_left_leaf(arc.tail); }
  bool is_rl(const Arc& arc) const { return arc.kind == ArcKind::preference && layout_->is_right_leaf(arc.tail); }

 private:
  static std::uint64_t key(int tail, int head) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(tail)) << 32) | static_cast<std::uint32_t>(head);
  }

  std::shared_ptr<const NetworkLayout> layout_;
  std::vector<Arc> arcs_;
  std::unordered_map<std::uint64_t, int> index_;
};

/// H_0: source arcs s -> C_a* (capacity q(a)), applicant tree arcs parent ->
/// child, post tree arcs child -> parent (capacity of the child class) and
/// sink arcs C_p* -> t (capacity q(p)). No preference arcs.
inline FlowGraph build_base_network(const Instance& instance) {
  auto layout = std::make_shared<const NetworkLayout>(instance);
  FlowGraph g(layout);
  for (int a = 0; a < instance.applicant_count(); ++a) {
    const ClassificationTree& t = layout->tree(Side::applicant, a);
    g.add_arc(Arc{NetworkLayout::source, layout->root(Side::applicant, a), t.nodes[0].quota, ArcKind::source, -1});
    for (std::size_t i = 1; i < t.nodes.size(); ++i) {
      g.add_arc(Arc{layout->node_id(Side::applicant, a, t.nodes[i].parent),
                    layout->node_id(Side::applicant, a, static_cast<int>(i)), t.nodes[i].quota, ArcKind::tree, -1});
    }
  }
  for (int p = 0; p < instance.post_count(); ++p) {
    const ClassificationTree& t = layout->tree(Side::post, p);
    for (std::size_t i = 1; i < t.nodes.size(); ++i) {
      g.add_arc(Arc{layout->node_id(Side::post, p, static_cast<int>(i)),
                    layout->node_id(Side::post, p, t.nodes[i].parent), t.nodes[i].quota, ArcKind::tree, -1});
    }
    g.add_arc(Arc{layout->root(Side::post, p), NetworkLayout::sink, t.nodes[0].quota, ArcKind::sink, -1});
  }
  return g;
}

/// Adds a unit arc C_a^p -> C_p^a for each listed instance edge. Throws
/// Error(duplicate_arc) if the two leaves are already joined in either direction.
inline void add_preference_arcs(FlowGraph& g, std::span<const int> edges) {
  const NetworkLayout& layout = g.layout();
  for (int e : edges) {
    int l = layout.left_leaf(e);
    int r = layout.right_leaf(e);
    if (g.find_arc(r, l)) {
      throw Error(ErrorKind::duplicate_arc, layout.label(r) + " -> " + layout.label(l));
    }
    g.add_arc(Arc{l, r, 1, ArcKind::preference, e});
  }
}

}  // namespace lamatch
