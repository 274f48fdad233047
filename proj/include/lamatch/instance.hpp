#pragma once

// Problem instances: applicants with preference lists (ties allowed), posts,
// vertex quotas and per-vertex classifications. Also matchings, signatures
// and the feasibility / popularity predicates defined over them.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"

namespace lamatch {

enum class Side : std::uint8_t { applicant, post };

constexpr Side opposite(Side side) noexcept {
  return side == Side::applicant ? Side::post : Side::applicant;
}

inline std::string side_name(Side side) { return side == Side::applicant ? "applicant" : "post"; }

struct Vertex {
  std::string name;
  int quota = 1;
};

/// A class C of `owner`: a set of neighbors (vertex ids on the opposite side)
/// of which at most `quota` may be matched to the owner.
struct ClassDef {
  Side owner_side = Side::post;
  int owner = 0;
  std::vector<int> members;  // sorted, unique
  int quota = 1;
};

/// An instance edge. `rank` is the 1-based index of the preference group the
/// post appears in on the applicant's list.
struct Edge {
  int applicant = 0;
  int post = 0;
  int rank = 1;
};

struct Pair {
  int applicant = 0;
  int post = 0;

  friend auto operator<=>(const Pair&, const Pair&) = default;
};

class Instance {
 public:
  int add_applicant(std::string name, int quota) {
    return add_vertex(Side::applicant, std::move(name), quota);
  }

  int add_post(std::string name, int quota) {
    return add_vertex(Side::post, std::move(name), quota);
  }

  /// Replaces the preference list of `applicant`. Each group is a tie; the
  /// group index (1-based) is the rank.
  void set_preferences(int applicant, std::vector<std::vector<int>> groups) {
    prefs_.at(static_cast<std::size_t>(applicant)) = std::move(groups);
    rebuild_edges();
  }

  void add_class(Side side, int owner, std::vector<int> members, int quota) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    classes_.push_back(ClassDef{side, owner, std::move(members), quota});
    auto& list = side == Side::applicant ? applicant_classes_ : post_classes_;
    list.at(static_cast<std::size_t>(owner)).push_back(static_cast<int>(classes_.size()) - 1);
  }

  int count(Side side) const noexcept {
    return static_cast<int>(side == Side::applicant ? applicants_.size() : posts_.size());
  }
  int applicant_count() const noexcept { return count(Side::applicant); }
  int post_count() const noexcept { return count(Side::post); }

  const Vertex& vertex(Side side, int id) const {
    return (side == Side::applicant ? applicants_ : posts_).at(static_cast<std::size_t>(id));
  }
  const Vertex& applicant(int id) const { return vertex(Side::applicant, id); }
  const Vertex& post(int id) const { return vertex(Side::post, id); }

  std::span<const Vertex> applicants() const noexcept { return applicants_; }
  std::span<const Vertex> posts() const noexcept { return posts_; }

  const std::vector<std::vector<int>>& preferences(int applicant) const {
    return prefs_.at(static_cast<std::size_t>(applicant));
  }

  std::span<const ClassDef> classes() const noexcept { return classes_; }

  /// Indices into classes() of the classes owned by a vertex, in definition order.
  const std::vector<int>& classes_of(Side side, int owner) const {
    return (side == Side::applicant ? applicant_classes_ : post_classes_)
        .at(static_cast<std::size_t>(owner));
  }

  /// Edges ordered by applicant, then rank, then position in the tie group.
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::optional<int> edge_index(int applicant, int post) const {
    auto it = edge_lookup_.find(key(applicant, post));
    if (it == edge_lookup_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<int> rank_of(int applicant, int post) const {
    auto e = edge_index(applicant, post);
    if (!e) return std::nullopt;
    return edges_[static_cast<std::size_t>(*e)].rank;
  }

  /// Largest rank used on any list (r); 0 when there are no edges.
  int max_rank() const noexcept {
    int r = 0;
    for (const auto& groups : prefs_) r = std::max(r, static_cast<int>(groups.size()));
    return r;
  }

  /// N(u). For an applicant: posts in preference order. For a post: applicants
  /// in increasing id order.
  const std::vector<int>& neighbors(Side side, int id) const {
    return (side == Side::applicant ? applicant_neighbors_ : post_neighbors_)
        .at(static_cast<std::size_t>(id));
  }

  std::optional<int> find(Side side, std::string_view name) const {
    const auto& index = side == Side::applicant ? applicant_names_ : post_names_;
    auto it = index.find(std::string(name));
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

 private:
  static std::uint64_t key(int a, int p) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(p);
  }

  int add_vertex(Side side, std::string name, int quota) {
    auto& list = side == Side::applicant ? applicants_ : posts_;
    auto& index = side == Side::applicant ? applicant_names_ : post_names_;
    int id = static_cast<int>(list.size());
    index.emplace(name, id);  // first declaration wins; duplicates are diagnosed by validate()
    list.push_back(Vertex{std::move(name), quota});
    if (side == Side::applicant) {
      prefs_.emplace_back();
      applicant_classes_.emplace_back();
      applicant_neighbors_.emplace_back();
    } else {
      post_classes_.emplace_back();
      post_neighbors_.emplace_back();
    }
    return id;
  }

  void rebuild_edges() {
    edges_.clear();
    edge_lookup_.clear();
    for (auto& n : applicant_neighbors_) n.clear();
    for (auto& n : post_neighbors_) n.clear();
    for (int a = 0; a < applicant_count(); ++a) {
      const auto& groups = prefs_[static_cast<std::size_t>(a)];
      for (std::size_t g = 0; g < groups.size(); ++g) {
        for (int p : groups[g]) {
          if (p < 0 || p >= post_count()) continue;
          // A post listed twice keeps its first (best) rank.
          if (!edge_lookup_.emplace(key(a, p), static_cast<int>(edges_.size())).second) continue;
          edges_.push_back(Edge{a, p, static_cast<int>(g) + 1});
          applicant_neighbors_[static_cast<std::size_t>(a)].push_back(p);
          post_neighbors_[static_cast<std::size_t>(p)].push_back(a);
        }
      }
    }
  }

  std::vector<Vertex> applicants_;
  std::vector<Vertex> posts_;
  std::unordered_map<std::string, int> applicant_names_;
  std::unordered_map<std::string, int> post_names_;
  std::vector<std::vector<std::vector<int>>> prefs_;
  std::vector<ClassDef> classes_;
  std::vector<std::vector<int>> applicant_classes_;
  std::vector<std::vector<int>> post_classes_;

  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, int> edge_lookup_;
  std::vector<std::vector<int>> applicant_neighbors_;
  std::vector<std::vector<int>> post_neighbors_;
};

/// A set of applicant-post pairs, kept sorted and duplicate free.
class Matching {
 public:
  Matching() = default;
  explicit Matching(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
    std::sort(pairs_.begin(), pairs_.end());
    pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
  }

  void insert(Pair pair) {
    auto it = std::lower_bound(pairs_.begin(), pairs_.end(), pair);
    if (it == pairs_.end() || *it != pair) pairs_.insert(it, pair);
  }

  bool contains(Pair pair) const { return std::binary_search(pairs_.begin(), pairs_.end(), pair); }

  std::span<const Pair> pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }

  /// Posts matched to `applicant`, ascending.
  std::vector<int> posts_of(int applicant) const {
    std::vector<int> out;
    auto lo = std::lower_bound(pairs_.begin(), pairs_.end(), Pair{applicant, -1});
    for (; lo != pairs_.end() && lo->applicant == applicant; ++lo) out.push_back(lo->post);
    return out;
  }

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  std::vector<Pair> pairs_;
};

/// Per-rank edge counts (x_1, ..., x_r). Compared lexicographically; a larger
/// signature is the better one.
struct Signature {
  std::vector<int> counts;

  int total() const {
    int s = 0;
    for (int c : counts) s += c;
    return s;
  }

  std::string to_string() const {
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < counts.size(); ++i) out << (i ? ", " : "") << counts[i];
    out << ')';
    return out.str();
  }

  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Lexicographic comparison after padding the shorter vector with zeros.
inline std::strong_ordering compare_signatures(const Signature& x, const Signature& y) {
  std::size_t n = std::max(x.counts.size(), y.counts.size());
  for (std::size_t i = 0; i < n; ++i) {
    int a = i < x.counts.size() ? x.counts[i] : 0;
    int b = i < y.counts.size() ? y.counts[i] : 0;
    if (a != b) return a <=> b;
  }
  return std::strong_ordering::equal;
}

/// Parses "(3, 2)" / "(3,2)" / "3 2". Returns nullopt on malformed input.
inline std::optional<Signature> parse_signature(std::string_view text) {
  std::string cleaned;
  for (char c : text) cleaned += (c == '(' || c == ')' || c == ',') ? ' ' : c;
  std::istringstream in(cleaned);
  Signature sig;
  std::string token;
  while (in >> token) {
    int value = 0;
    std::size_t used = 0;
    try {
      value = std::stoi(token, &used);
    } catch (const std::exception&) {
      return std::nullopt;
    }
    if (used != token.size() || value < 0) return std::nullopt;
    sig.counts.push_back(value);
  }
  if (sig.counts.empty()) return std::nullopt;
  return sig;
}

inline Signature signature_of(const Instance& instance, const Matching& m) {
  Signature sig;
  sig.counts.assign(static_cast<std::size_t>(instance.max_rank()), 0);
  for (const Pair& pr : m.pairs()) {
    auto rank = instance.rank_of(pr.applicant, pr.post);
    if (!rank) continue;
    if (static_cast<std::size_t>(*rank) > sig.counts.size()) sig.counts.resize(static_cast<std::size_t>(*rank), 0);
    ++sig.counts[static_cast<std::size_t>(*rank - 1)];
  }
  return sig;
}

// ---------------------------------------------------------------------------
// Feasibility

struct Violation {
  enum class Kind { not_an_edge, vertex_quota, class_quota };
  Kind kind = Kind::not_an_edge;
  Side side = Side::applicant;
  int vertex = 0;       // owner, or the applicant for not_an_edge
  int other = -1;       // the post for not_an_edge
  int class_index = -1; // index into Instance::classes() for class_quota
  int count = 0;
};

/// First violated constraint, scanning applicants then posts; for each vertex
/// its own quota is checked before its classes (in definition order).
inline std::optional<Violation> first_violation(const Instance& instance, const Matching& m) {
  std::vector<std::vector<int>> app_partners(static_cast<std::size_t>(instance.applicant_count()));
  std::vector<std::vector<int>> post_partners(static_cast<std::size_t>(instance.post_count()));
  for (const Pair& pr : m.pairs()) {
    if (pr.applicant < 0 || pr.applicant >= instance.applicant_count() || pr.post < 0 ||
        pr.post >= instance.post_count() || !instance.edge_index(pr.applicant, pr.post)) {
      return Violation{Violation::Kind::not_an_edge, Side::applicant, pr.applicant, pr.post, -1, 0};
    }
    app_partners[static_cast<std::size_t>(pr.applicant)].push_back(pr.post);
    post_partners[static_cast<std::size_t>(pr.post)].push_back(pr.applicant);
  }
  for (Side side : {Side::applicant, Side::post}) {
    const auto& partners = side == Side::applicant ? app_partners : post_partners;
    for (int u = 0; u < instance.count(side); ++u) {
      auto mine = partners[static_cast<std::size_t>(u)];
      std::sort(mine.begin(), mine.end());
      int used = static_cast<int>(mine.size());
      if (used > instance.vertex(side, u).quota) {
        return Violation{Violation::Kind::vertex_quota, side, u, -1, -1, used};
      }
      for (int ci : instance.classes_of(side, u)) {
        const ClassDef& c = instance.classes()[static_cast<std::size_t>(ci)];
        int inside = 0;
        for (int w : mine) inside += std::binary_search(c.members.begin(), c.members.end(), w) ? 1 : 0;
        if (inside > c.quota) return Violation{Violation::Kind::class_quota, side, u, -1, ci, inside};
      }
    }
  }
  return std::nullopt;
}

inline bool is_feasible(const Instance& instance, const Matching& m) {
  return !first_violation(instance, m).has_value();
}

inline std::string describe(const Instance& instance, const Violation& v) {
  std::ostringstream out;
  switch (v.kind) {
    case Violation::Kind::not_an_edge:
      out << "not an edge: (";
      out << (v.vertex >= 0 && v.vertex < instance.applicant_count() ? instance.applicant(v.vertex).name : "?");
      out << ", ";
      out << (v.other >= 0 && v.other < instance.post_count() ? instance.post(v.other).name : "?");
      out << ')';
      break;
    case Violation::Kind::vertex_quota:
      out << "quota exceeded at " << instance.vertex(v.side, v.vertex).name << " (" << v.count << " > "
          << instance.vertex(v.side, v.vertex).quota << ')';
      break;
    case Violation::Kind::class_quota: {
      const ClassDef& c = instance.classes()[static_cast<std::size_t>(v.class_index)];
      out << "class quota exceeded at " << instance.vertex(v.side, v.vertex).name << " class {";
      for (std::size_t i = 0; i < c.members.size(); ++i) {
        out << (i ? " " : "") << instance.vertex(opposite(v.side), c.members[i]).name;
      }
      out << '}';
      break;
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Popularity (many-to-one only)

inline void require_many_to_one(const Instance& instance) {
  for (const Vertex& a : instance.applicants()) {
    if (a.quota != 1) throw Error(ErrorKind::not_many_to_one, "applicant " + a.name + " has quota > 1");
  }
}

/// Rank of the post matched to each applicant; 0 means unmatched.
inline std::vector<int> assigned_ranks(const Instance& instance, const Matching& m) {
  std::vector<int> ranks(static_cast<std::size_t>(instance.applicant_count()), 0);
  for (const Pair& pr : m.pairs()) {
    auto r = instance.rank_of(pr.applicant, pr.post);
    if (r) ranks[static_cast<std::size_t>(pr.applicant)] = *r;
  }
  return ranks;
}

/// +1 when rank `x` is preferred to rank `y`, -1 when `y` is preferred, 0 on
/// indifference. Rank 0 denotes "unmatched", which is worse than any post.
constexpr int vote(int x, int y) noexcept {
  if (x == y) return 0;
  if (x == 0) return -1;
  if (y == 0) return 1;
  return x < y ? 1 : -1;
}

/// Votes for m1 minus votes for m2. Positive means m1 is more popular.
inline int more_popular_than(const Instance& instance, const Matching& m1, const Matching& m2) {
  require_many_to_one(instance);
  auto r1 = assigned_ranks(instance, m1);
  auto r2 = assigned_ranks(instance, m2);
  int balance = 0;
  for (std::size_t a = 0; a < r1.size(); ++a) balance += vote(r1[a], r2[a]);
  return balance;
}

}  // namespace lamatch
