#pragma once

// Laminar classifications arranged as rooted trees. The root is the whole
// neighborhood N(u) with quota q(u); every neighbor w gets a singleton leaf
// {w} with quota 1; the parent of a class is the smallest class strictly
// containing it.

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "instance.hpp"

namespace lamatch {

namespace detail {

inline bool sorted_subset(const std::vector<int>& small, const std::vector<int>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

inline bool sorted_disjoint(const std::vector<int>& x, const std::vector<int>& y) {
  auto i = x.begin();
  auto j = y.begin();
  while (i != x.end() && j != y.end()) {
    if (*i == *j) return false;
    if (*i < *j) ++i; else ++j;
  }
  return true;
}

}  // namespace detail

/// True iff every two sets are nested or disjoint. Sets must be sorted.
inline bool is_laminar(std::span<const std::vector<int>> sets) {
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      const auto& x = sets[i];
      const auto& y = sets[j];
      if (detail::sorted_disjoint(x, y)) continue;
      if (x.size() <= y.size() ? detail::sorted_subset(x, y) : detail::sorted_subset(y, x)) continue;
      return false;
    }
  }
  return true;
}

inline bool is_laminar(std::span<const ClassDef> classes) {
  std::vector<std::vector<int>> sets;
  sets.reserve(classes.size());
  for (const ClassDef& c : classes) sets.push_back(c.members);
  return is_laminar(std::span<const std::vector<int>>(sets));
}

inline std::vector<ClassDef> classes_owned_by(const Instance& instance, Side side, int owner) {
  std::vector<ClassDef> out;
  for (int ci : instance.classes_of(side, owner)) out.push_back(instance.classes()[static_cast<std::size_t>(ci)]);
  return out;
}

struct TreeNode {
  std::vector<int> members;  // sorted vertex ids of the opposite side
  int quota = 1;
  int parent = -1;
  std::vector<int> children;
  int leaf_of = -1;     // neighbor id when this is the singleton leaf {w}
  int user_class = 0;   // 1-based ordinal among the owner's own classes, 0 if added by preprocessing
};

struct ClassificationTree {
  Side side = Side::post;
  int owner = 0;
  std::vector<TreeNode> nodes;  // preorder; nodes[0] is the root
  std::vector<int> leaf_index;  // neighbor position in N(owner) -> node index

  static constexpr int root = 0;

  bool is_leaf(int node) const { return nodes[static_cast<std::size_t>(node)].leaf_of >= 0; }
};

/// Builds the classification tree of one vertex. Identical sets are merged
/// into a single node keeping the minimum quota.
inline ClassificationTree build_tree(const Instance& instance, Side side, int owner) {
  struct Raw {
    std::vector<int> members;
    int quota;
    int leaf_of;
    int user_class;
    bool is_root;
    int order;
  };
  const std::vector<int>& nbrs = instance.neighbors(side, owner);
  std::vector<int> all(nbrs.begin(), nbrs.end());
  std::sort(all.begin(), all.end());

  std::vector<Raw> raw;
  raw.push_back(Raw{all, instance.vertex(side, owner).quota, -1, 0, true, 0});
  const auto& owned = instance.classes_of(side, owner);
  {
    std::vector<std::vector<int>> sets;
    for (int ci : owned) sets.push_back(instance.classes()[static_cast<std::size_t>(ci)].members);
    if (!is_laminar(std::span<const std::vector<int>>(sets))) {
      throw Error(ErrorKind::non_laminar,
                  "classes of " + side_name(side) + " " + instance.vertex(side, owner).name);
    }
  }
  for (std::size_t k = 0; k < owned.size(); ++k) {
    const ClassDef& c = instance.classes()[static_cast<std::size_t>(owned[k])];
    raw.push_back(Raw{c.members, c.quota, -1, static_cast<int>(k) + 1, false, static_cast<int>(raw.size())});
  }
  for (int w : nbrs) raw.push_back(Raw{{w}, 1, w, 0, false, static_cast<int>(raw.size())});

  // Merge identical sets. The surviving node keeps the strongest role
  // (root > leaf > user class) and the minimum quota.
  std::vector<Raw> merged;
  for (Raw& r : raw) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const Raw& m) { return m.members == r.members; });
    if (it == merged.end()) {
      merged.push_back(std::move(r));
      continue;
    }
    it->quota = std::min(it->quota, r.quota);
    it->is_root = it->is_root || r.is_root;
    if (r.leaf_of >= 0) it->leaf_of = r.leaf_of;
    if (it->user_class == 0) it->user_class = r.user_class;
  }

  // Larger sets first; the first containing set seen scanning backwards is the
  // smallest superset, since supersets of a class form a chain.
  std::stable_sort(merged.begin(), merged.end(), [](const Raw& x, const Raw& y) {
    if (x.is_root != y.is_root) return x.is_root;
    return x.members.size() > y.members.size();
  });
  std::vector<int> parent(merged.size(), -1);
  for (std::size_t i = 1; i < merged.size(); ++i) {
    for (std::size_t j = i; j-- > 0;) {
      if (detail::sorted_subset(merged[i].members, merged[j].members)) {
        parent[i] = static_cast<int>(j);
        break;
      }
    }
  }
  std::vector<std::vector<int>> kids(merged.size());
  for (std::size_t i = 1; i < merged.size(); ++i) kids[static_cast<std::size_t>(parent[i])].push_back(static_cast<int>(i));
  // Children: user classes in definition order, then leaves in N(u) order.
  for (auto& k : kids) {
    std::stable_sort(k.begin(), k.end(), [&](int x, int y) { return merged[static_cast<std::size_t>(x)].order < merged[static_cast<std::size_t>(y)].order; });
  }

  ClassificationTree tree;
  tree.side = side;
  tree.owner = owner;
  std::vector<int> new_index(merged.size(), -1);
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    new_index[static_cast<std::size_t>(cur)] = static_cast<int>(tree.nodes.size());
    const Raw& r = merged[static_cast<std::size_t>(cur)];
    TreeNode node;
    node.members = r.members;
    node.quota = r.quota;
    node.leaf_of = r.leaf_of;
    node.user_class = r.user_class;
    tree.nodes.push_back(std::move(node));
    const auto& k = kids[static_cast<std::size_t>(cur)];
    for (auto it = k.rbegin(); it != k.rend(); ++it) stack.push_back(*it);
  }
  for (std::size_t i = 1; i < merged.size(); ++i) {
    int child = new_index[i];
    int par = new_index[static_cast<std::size_t>(parent[i])];
    tree.nodes[static_cast<std::size_t>(child)].parent = par;
  }
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    int par = tree.nodes[i].parent;
    if (par >= 0) tree.nodes[static_cast<std::size_t>(par)].children.push_back(static_cast<int>(i));
  }
  tree.leaf_index.assign(nbrs.size(), -1);
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    int w = tree.nodes[i].leaf_of;
    if (w < 0) continue;
    auto pos = std::find(nbrs.begin(), nbrs.end(), w) - nbrs.begin();
    tree.leaf_index[static_cast<std::size_t>(pos)] = static_cast<int>(i);
  }
  return tree;
}

}  // namespace lamatch
