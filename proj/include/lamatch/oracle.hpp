#pragma once

// Exponential-time ground truth for small instances. Nothing here uses the
// flow machinery: feasibility is tracked with plain per-vertex and per-class
// counters, so classes need not be laminar.

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "instance.hpp"

namespace lamatch {

struct OracleOptions {
  int cap = 16;  // maximum number of edges
};

namespace detail {

inline void require_small(const Instance& instance, const OracleOptions& options) {
  if (static_cast<int>(instance.edges().size()) > options.cap) {
    throw Error(ErrorKind::too_large, std::to_string(instance.edges().size()) + " edges exceed the oracle cap of " +
                                          std::to_string(options.cap));
  }
}

/// Running loads of every quota-carrying set. Counter ids: applicants, then
/// posts, then classes in definition order.
class QuotaTracker {
 public:
  explicit QuotaTracker(const Instance& instance) {
    const int na = instance.applicant_count();
    const int np = instance.post_count();
    for (const Vertex& v : instance.applicants()) capacity_.push_back(v.quota);
    for (const Vertex& v : instance.posts()) capacity_.push_back(v.quota);
    for (const ClassDef& c : instance.classes()) capacity_.push_back(c.quota);
    load_.assign(capacity_.size(), 0);
    const auto edges = instance.edges();
    touched_.resize(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
      auto& t = touched_[e];
      t.push_back(edges[e].applicant);
      t.push_back(na + edges[e].post);
      const auto classes = instance.classes();
      for (std::size_t ci = 0; ci < classes.size(); ++ci) {
        const ClassDef& c = classes[ci];
        bool hit = c.owner_side == Side::applicant
                       ? c.owner == edges[e].applicant &&
                             std::binary_search(c.members.begin(), c.members.end(), edges[e].post)
                       : c.owner == edges[e].post &&
                             std::binary_search(c.members.begin(), c.members.end(), edges[e].applicant);
        if (hit) t.push_back(na + np + static_cast<int>(ci));
      }
    }
  }

  bool can_add(int e) const {
    for (int c : touched_[static_cast<std::size_t>(e)]) {
      if (load_[static_cast<std::size_t>(c)] >= capacity_[static_cast<std::size_t>(c)]) return false;
    }
    return true;
  }
  void add(int e) {
    for (int c : touched_[static_cast<std::size_t>(e)]) ++load_[static_cast<std::size_t>(c)];
  }
  void remove(int e) {
    for (int c : touched_[static_cast<std::size_t>(e)]) --load_[static_cast<std::size_t>(c)];
  }
  int slack(int counter) const {
    return capacity_[static_cast<std::size_t>(counter)] - load_[static_cast<std::size_t>(counter)];
  }

 private:
  std::vector<int> capacity_;
  std::vector<int> load_;
  std::vector<std::vector<int>> touched_;
};

inline Matching to_matching(const Instance& instance, const std::vector<int>& chosen) {
  std::vector<Pair> pairs;
  for (int e : chosen) {
    const Edge& edge = instance.edges()[static_cast<std::size_t>(e)];
    pairs.push_back(Pair{edge.applicant, edge.post});
  }
  return Matching(std::move(pairs));
}

// Edge ids sorted by rank, ties kept in instance order.
inline std::vector<int> edges_by_rank(const Instance& instance) {
  std::vector<int> order(instance.edges().size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return instance.edges()[static_cast<std::size_t>(x)].rank < instance.edges()[static_cast<std::size_t>(y)].rank;
  });
  return order;
}

/// Branch and bound over edge subsets in rank order. For every rank k the
/// bound adds, per applicant and per post, min(slack, addable remaining
/// rank-k edges) and keeps the smaller of the two sums.
class SignatureSearch {
 public:
  explicit SignatureSearch(const Instance& instance)
      : inst_(instance), tracker_(instance), order_(edges_by_rank(instance)),
        counts_(static_cast<std::size_t>(instance.max_rank()), 0) {}

  /// Best signature and a witness.
  std::pair<Signature, Matching> maximize() {
    mode_ = Mode::maximize;
    best_ = Signature{counts_};
    best_pairs_.clear();
    recurse(0);
    return {best_, to_matching(inst_, best_pairs_)};
  }

  /// A matching whose signature is at least `target`, if any.
  std::optional<Matching> reach(const Signature& target) {
    mode_ = Mode::reach;
    target_ = target;
    found_ = false;
    recurse(0);
    if (!found_) return std::nullopt;
    return to_matching(inst_, best_pairs_);
  }

 private:
  enum class Mode { maximize, reach };

  Signature upper_bound(std::size_t from) {
    const int na = inst_.applicant_count();
    const int np = inst_.post_count();
    Signature ub{counts_};
    std::size_t i = from;
    while (i < order_.size()) {
      int rank = inst_.edges()[static_cast<std::size_t>(order_[i])].rank;
      std::vector<int> per_app(static_cast<std::size_t>(na), 0);
      std::vector<int> per_post(static_cast<std::size_t>(np), 0);
      for (; i < order_.size() && inst_.edges()[static_cast<std::size_t>(order_[i])].rank == rank; ++i) {
        int e = order_[i];
        if (!tracker_.can_add(e)) continue;
        const Edge& edge = inst_.edges()[static_cast<std::size_t>(e)];
        ++per_app[static_cast<std::size_t>(edge.applicant)];
        ++per_post[static_cast<std::size_t>(edge.post)];
      }
      int by_app = 0;
      int by_post = 0;
      for (int a = 0; a < na; ++a) by_app += std::min(per_app[static_cast<std::size_t>(a)], tracker_.slack(a));
      for (int p = 0; p < np; ++p) by_post += std::min(per_post[static_cast<std::size_t>(p)], tracker_.slack(na + p));
      ub.counts[static_cast<std::size_t>(rank - 1)] += std::min(by_app, by_post);
    }
    return ub;
  }

  void recurse(std::size_t i) {
    if (found_) return;
    Signature now{counts_};
    if (mode_ == Mode::reach && compare_signatures(now, target_) >= 0) {
      found_ = true;
      best_pairs_ = chosen_;
      return;
    }
    if (mode_ == Mode::maximize && compare_signatures(now, best_) > 0) {
      best_ = now;
      best_pairs_ = chosen_;
    }
    if (i == order_.size()) return;
    Signature ub = upper_bound(i);
    if (mode_ == Mode::maximize && compare_signatures(ub, best_) <= 0) return;
    if (mode_ == Mode::reach && compare_signatures(ub, target_) < 0) return;
    int e = order_[i];
    if (tracker_.can_add(e)) {
      int rank = inst_.edges()[static_cast<std::size_t>(e)].rank;
      tracker_.add(e);
      chosen_.push_back(e);
      ++counts_[static_cast<std::size_t>(rank - 1)];
      recurse(i + 1);
      --counts_[static_cast<std::size_t>(rank - 1)];
      chosen_.pop_back();
      tracker_.remove(e);
    }
    recurse(i + 1);
  }

  const Instance& inst_;
  QuotaTracker tracker_;
  std::vector<int> order_;
  std::vector<int> counts_;
  std::vector<int> chosen_;
  Mode mode_ = Mode::maximize;
  Signature best_;
  Signature target_;
  std::vector<int> best_pairs_;
  bool found_ = false;
};

// Per-applicant options for many-to-one searches: edge ids best rank first,
// then -1 for "unmatched".
inline std::vector<std::vector<int>> applicant_options(const Instance& instance) {
  std::vector<std::vector<int>> options(static_cast<std::size_t>(instance.applicant_count()));
  const auto edges = instance.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) options[static_cast<std::size_t>(edges[e].applicant)].push_back(static_cast<int>(e));
  for (auto& o : options) o.push_back(-1);
  return options;
}

inline int option_rank(const Instance& instance, int e) {
  return e < 0 ? 0 : instance.edges()[static_cast<std::size_t>(e)].rank;
}

inline int best_rank(const Instance& instance, int a) {
  return instance.preferences(a).empty() ? 0 : 1;
}

/// Searches for a feasible N with votes(N) - votes(M) > 0. `m_rank` holds
/// the rank of M(a) per applicant (0 = unmatched).
class MarginSearch {
 public:
  MarginSearch(const Instance& instance, std::vector<int> m_rank)
      : inst_(instance), tracker_(instance), options_(applicant_options(instance)), m_rank_(std::move(m_rank)) {
    const int n = instance.applicant_count();
    suffix_gain_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int a = n - 1; a >= 0; --a) {
      int g = vote(best_rank(instance, a), m_rank_[static_cast<std::size_t>(a)]) > 0 ? 1 : 0;
      suffix_gain_[static_cast<std::size_t>(a)] = suffix_gain_[static_cast<std::size_t>(a) + 1] + g;
    }
    // Options in order of decreasing gain against M.
    for (int a = 0; a < n; ++a) {
      auto& o = options_[static_cast<std::size_t>(a)];
      std::stable_sort(o.begin(), o.end(), [&](int x, int y) {
        return vote(option_rank(inst_, x), m_rank_[static_cast<std::size_t>(a)]) >
               vote(option_rank(inst_, y), m_rank_[static_cast<std::size_t>(a)]);
      });
    }
  }

  std::optional<Matching> run() {
    if (recurse(0, 0)) return to_matching(inst_, chosen_);
    return std::nullopt;
  }

 private:
  bool recurse(int a, int margin) {
    if (margin + suffix_gain_[static_cast<std::size_t>(a)] <= 0) return false;
    if (a == inst_.applicant_count()) return true;
    for (int e : options_[static_cast<std::size_t>(a)]) {
      int gain = vote(option_rank(inst_, e), m_rank_[static_cast<std::size_t>(a)]);
      if (e < 0) return recurse(a + 1, margin + gain);
      if (!tracker_.can_add(e)) continue;
      tracker_.add(e);
      chosen_.push_back(e);
      if (recurse(a + 1, margin + gain)) return true;
      chosen_.pop_back();
      tracker_.remove(e);
    }
    return false;
  }

  const Instance& inst_;
  QuotaTracker tracker_;
  std::vector<std::vector<int>> options_;
  std::vector<int> m_rank_;
  std::vector<int> suffix_gain_;
  std::vector<int> chosen_;
};

}  // namespace detail

/// Calls `visit` once for every feasible matching. Throws Error(too_large).
inline void enumerate_feasible(const Instance& instance, const std::function<void(const Matching&)>& visit,
                               OracleOptions options = {}) {
  detail::require_small(instance, options);
  detail::QuotaTracker tracker(instance);
  std::vector<int> chosen;
  const int n = static_cast<int>(instance.edges().size());
  std::function<void(int)> rec = [&](int e) {
    if (e == n) {
      visit(detail::to_matching(instance, chosen));
      return;
    }
    rec(e + 1);
    if (tracker.can_add(e)) {
      tracker.add(e);
      chosen.push_back(e);
      rec(e + 1);
      chosen.pop_back();
      tracker.remove(e);
    }
  };
  rec(0);
}

inline std::pair<Signature, Matching> oracle_rmm_signature(const Instance& instance, OracleOptions options = {}) {
  detail::require_small(instance, options);
  return detail::SignatureSearch(instance).maximize();
}

/// True iff some feasible matching has signature at least `target`.
inline bool oracle_decision(const Instance& instance, const Signature& target, OracleOptions options = {}) {
  detail::require_small(instance, options);
  return detail::SignatureSearch(instance).reach(target).has_value();
}

inline int oracle_max_cardinality(const Instance& instance, OracleOptions options = {}) {
  detail::require_small(instance, options);
  // Cardinality is the signature of the same instance with every rank set to 1.
  Instance flat = instance;
  for (int a = 0; a < instance.applicant_count(); ++a) {
    std::vector<int> all;
    for (const auto& g : instance.preferences(a)) all.insert(all.end(), g.begin(), g.end());
    flat.set_preferences(a, all.empty() ? std::vector<std::vector<int>>{} : std::vector<std::vector<int>>{all});
  }
  return detail::SignatureSearch(flat).maximize().first.total();
}

/// A feasible matching more popular than `m`, or nullopt when `m` is popular.
inline std::optional<Matching> oracle_beating(const Instance& instance, const Matching& m, OracleOptions options = {}) {
  detail::require_small(instance, options);
  require_many_to_one(instance);
  return detail::MarginSearch(instance, assigned_ranks(instance, m)).run();
}

inline bool oracle_is_popular(const Instance& instance, const Matching& m, OracleOptions options = {}) {
  return is_feasible(instance, m) && !oracle_beating(instance, m, options);
}

struct PopularSearchResult {
  bool exists = false;
  std::optional<Matching> witness;
  int candidates_checked = 0;
};

/// Searches all feasible matchings for a popular one. Every matching found to
/// beat some candidate is kept and used to discard later candidates it also
/// beats, which keeps the search exact.
inline PopularSearchResult oracle_popular(const Instance& instance, OracleOptions options = {}) {
  detail::require_small(instance, options);
  require_many_to_one(instance);
  const int n = instance.applicant_count();
  auto options_of = detail::applicant_options(instance);
  detail::QuotaTracker tracker(instance);

  struct Beater {
    std::vector<int> rank;           // N's rank per applicant
    std::vector<int> suffix_min;     // least possible vote sum over applicants a..n-1
    int score = 0;                   // running votes(N) - votes(partial M)
  };
  std::vector<Beater> beaters;
  std::vector<int> chosen;  // option per decided applicant
  std::vector<int> m_rank(static_cast<std::size_t>(n), 0);
  auto add_beater = [&](const Matching& nm) {
    Beater b;
    b.rank = assigned_ranks(instance, nm);
    b.suffix_min.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int a = n - 1; a >= 0; --a) {
      int r = b.rank[static_cast<std::size_t>(a)];
      // M(a) can beat N(a) exactly when a has a post better than N(a).
      bool can_lose = vote(detail::best_rank(instance, a), r) > 0;
      b.suffix_min[static_cast<std::size_t>(a)] = b.suffix_min[static_cast<std::size_t>(a) + 1] - (can_lose ? 1 : 0);
    }
    for (std::size_t a = 0; a < chosen.size(); ++a) b.score += vote(b.rank[a], m_rank[a]);
    beaters.push_back(std::move(b));
  };

  PopularSearchResult result;

  auto dominated = [&](int a) {
    for (const Beater& b : beaters) {
      if (b.score + b.suffix_min[static_cast<std::size_t>(a)] > 0) return true;
    }
    return false;
  };

  std::function<bool(int)> rec = [&](int a) -> bool {
    if (dominated(a)) return false;
    if (a == n) {
      ++result.candidates_checked;
      std::vector<int> edges;
      for (int e : chosen) if (e >= 0) edges.push_back(e);
      Matching m = detail::to_matching(instance, edges);
      // A single applicant who can be added or can move up gives a cheap beater.
      for (int b = 0; b < n; ++b) {
        int cur = chosen[static_cast<std::size_t>(b)];
        if (cur >= 0) tracker.remove(cur);
        for (int e : options_of[static_cast<std::size_t>(b)]) {
          if (e < 0 || vote(detail::option_rank(instance, e), m_rank[static_cast<std::size_t>(b)]) <= 0) continue;
          if (!tracker.can_add(e)) continue;
          std::vector<int> alt;
          for (int x : edges) if (x != cur) alt.push_back(x);
          alt.push_back(e);
          if (cur >= 0) tracker.add(cur);
          add_beater(detail::to_matching(instance, alt));
          return false;
        }
        if (cur >= 0) tracker.add(cur);
      }
      if (auto beater = detail::MarginSearch(instance, m_rank).run()) {
        add_beater(*beater);
        return false;
      }
      result.exists = true;
      result.witness = m;
      return true;
    }
    for (int e : options_of[static_cast<std::size_t>(a)]) {
      if (e >= 0 && !tracker.can_add(e)) continue;
      int r = detail::option_rank(instance, e);
      if (e >= 0) tracker.add(e);
      chosen.push_back(e);
      m_rank[static_cast<std::size_t>(a)] = r;
      for (Beater& b : beaters) b.score += vote(b.rank[static_cast<std::size_t>(a)], r);
      bool done = rec(a + 1);
      // Beaters found below this level were scored against the full prefix.
      for (Beater& b : beaters) b.score -= vote(b.rank[static_cast<std::size_t>(a)], r);
      m_rank[static_cast<std::size_t>(a)] = 0;
      chosen.pop_back();
      if (e >= 0) tracker.remove(e);
      if (done) return true;
    }
    return false;
  };
  rec(0);
  return result;
}

}  // namespace lamatch
