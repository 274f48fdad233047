#pragma once

// Seeded random instances with laminar classifications. Draws use mt19937_64
// with plain modulo reduction so that a seed yields the same instance on every
// platform.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "instance.hpp"

namespace lamatch {

struct GeneratorParams {
  int applicants = 5;
  int posts = 4;
  int max_rank = 3;
  double tie_probability = 0.3;
  int max_applicant_quota = 2;
  int max_post_quota = 2;
  int max_class_depth = 2;
  double class_probability = 0.5;
  int max_edges = 12;
  bool many_to_one = false;  // applicant quotas 1, no applicant classes
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform-ish integer in [lo, hi].
  int between(int lo, int hi) {
    auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
  }
  bool chance(double p) { return static_cast<double>(engine_() % 1000000) < p * 1000000.0; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[static_cast<std::size_t>(between(0, static_cast<int>(i) - 1))]);
  }

 private:
  std::mt19937_64 engine_;
};

namespace detail {

// Adds nested and disjoint classes inside `members` (already a class or N(u)).
inline void add_laminar_classes(Instance& inst, Side side, int owner, std::vector<int> members, int depth,
                                const GeneratorParams& params, Rng& rng) {
  if (depth >= params.max_class_depth || members.size() < 2) return;
  rng.shuffle(members);
  std::size_t pos = 0;
  while (pos < members.size()) {
    std::size_t len = static_cast<std::size_t>(rng.between(1, static_cast<int>(members.size() - pos)));
    std::vector<int> chunk(members.begin() + static_cast<std::ptrdiff_t>(pos),
                           members.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
    if (chunk.size() >= 2 && chunk.size() < members.size() && rng.chance(params.class_probability)) {
      inst.add_class(side, owner, chunk, rng.between(1, static_cast<int>(chunk.size())));
      add_laminar_classes(inst, side, owner, chunk, depth + 1, params, rng);
    }
  }
}

}  // namespace detail

inline Instance random_instance(std::uint64_t seed, const GeneratorParams& params) {
  Rng rng(seed);
  Instance inst;
  for (int a = 0; a < params.applicants; ++a) {
    int quota = params.many_to_one ? 1 : rng.between(1, params.max_applicant_quota);
    inst.add_applicant("a" + std::to_string(a + 1), quota);
  }
  for (int p = 0; p < params.posts; ++p) inst.add_post("p" + std::to_string(p + 1), rng.between(1, params.max_post_quota));

  // Every applicant gets at least one edge; the rest of the budget is spread randomly.
  int budget = std::max(params.max_edges, params.applicants) - params.applicants;
  for (int a = 0; a < params.applicants; ++a) {
    int extra_cap = std::min(params.posts - 1, budget);
    int extra = extra_cap > 0 ? rng.between(0, extra_cap) : 0;
    budget -= extra;
    std::vector<int> posts(static_cast<std::size_t>(params.posts));
    for (int p = 0; p < params.posts; ++p) posts[static_cast<std::size_t>(p)] = p;
    rng.shuffle(posts);
    posts.resize(static_cast<std::size_t>(1 + extra));
    std::vector<std::vector<int>> groups{{posts.front()}};
    for (std::size_t i = 1; i < posts.size(); ++i) {
      bool tie = rng.chance(params.tie_probability) || static_cast<int>(groups.size()) >= params.max_rank;
      if (tie) groups.back().push_back(posts[i]);
      else groups.push_back({posts[i]});
    }
    inst.set_preferences(a, std::move(groups));
  }

  for (int p = 0; p < params.posts; ++p) {
    detail::add_laminar_classes(inst, Side::post, p, inst.neighbors(Side::post, p), 0, params, rng);
  }
  if (!params.many_to_one) {
    for (int a = 0; a < params.applicants; ++a) {
      detail::add_laminar_classes(inst, Side::applicant, a, inst.neighbors(Side::applicant, a), 0, params, rng);
    }
  }
  return inst;
}

/// Larger instances for timing: `edges` edges over edges / 4 applicants, each
/// ranking four posts into three ranks, posts with quota 2..4 and two levels
/// of classes.
inline Instance scaling_instance(int edges, std::uint64_t seed) {
  Rng rng(seed);
  const int applicants = std::max(1, edges / 4);
  const int posts = std::max(4, edges / 8);
  GeneratorParams params;
  params.max_class_depth = 2;
  params.class_probability = 0.5;
  Instance inst;
  for (int a = 0; a < applicants; ++a) inst.add_applicant("a" + std::to_string(a + 1), rng.between(1, 2));
  for (int p = 0; p < posts; ++p) inst.add_post("p" + std::to_string(p + 1), rng.between(2, 4));
  for (int a = 0; a < applicants; ++a) {
    std::vector<int> chosen;
    while (chosen.size() < 4) {
      int p = rng.between(0, posts - 1);
      if (std::find(chosen.begin(), chosen.end(), p) == chosen.end()) chosen.push_back(p);
    }
    inst.set_preferences(a, {{chosen[0]}, {chosen[1], chosen[2]}, {chosen[3]}});
  }
  for (int p = 0; p < posts; ++p) {
    detail::add_laminar_classes(inst, Side::post, p, inst.neighbors(Side::post, p), 0, params, rng);
  }
  return inst;
}

}  // namespace lamatch
