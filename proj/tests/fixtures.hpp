#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lamatch.hpp"

namespace fixtures {

inline lamatch::Instance example() {
  auto parsed = lamatch::load_instance(std::string(LAMATCH_DATA_DIR) + "/example.txt");
  return parsed.instance;
}

inline lamatch::Matching by_name(const lamatch::Instance& inst,
                                 const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<lamatch::Pair> out;
  for (const auto& [a, p] : pairs) {
    out.push_back({*inst.find(lamatch::Side::applicant, a), *inst.find(lamatch::Side::post, p)});
  }
  return lamatch::Matching(std::move(out));
}

inline lamatch::Matching example_m(const lamatch::Instance& inst) {
  return by_name(inst, {{"a1", "p4"}, {"a2", "p1"}, {"a3", "p3"}, {"a4", "p5"}, {"a5", "p2"}});
}

inline lamatch::Matching example_mprime(const lamatch::Instance& inst) {
  return by_name(inst, {{"a1", "p1"}, {"a2", "p1"}, {"a3", "p3"}, {"a4", "p5"}, {"a5", "p2"}});
}

/// Small many-to-many parameters used by the randomized suites.
inline lamatch::GeneratorParams small_params(bool many_to_one = false) {
  lamatch::GeneratorParams p;
  p.applicants = 5;
  p.posts = 4;
  p.max_rank = 3;
  p.max_edges = 12;
  p.max_applicant_quota = 2;
  p.max_post_quota = 2;
  p.many_to_one = many_to_one;
  return p;
}

/// Random instance sizes vary with the seed so the suite covers small cases too.
inline lamatch::Instance random_small(std::uint64_t seed, bool many_to_one = false) {
  lamatch::Rng rng(seed * 7919 + 17);
  auto params = small_params(many_to_one);
  params.applicants = rng.between(1, 5);
  params.posts = rng.between(1, 4);
  return lamatch::random_instance(seed, params);
}

/// Many-to-one instances with more applicants than post capacity, where
/// popular matchings often fail to exist.
inline lamatch::Instance random_contested(std::uint64_t seed) {
  lamatch::Rng rng(seed * 104729 + 3);
  auto params = small_params(true);
  params.applicants = rng.between(4, 6);
  params.posts = rng.between(3, 4);
  params.max_post_quota = 1;
  params.tie_probability = 0;
  params.max_rank = params.posts;
  params.max_edges = params.applicants * params.posts;
  return lamatch::random_instance(seed, params);
}

/// Oracle edge limit that covers both random families.
inline constexpr lamatch::OracleOptions random_cap{24};

/// A one-vertex-per-line instance with no classes: applicant i ranks `lists[i]`.
inline lamatch::Instance plain(int posts, const std::vector<std::vector<std::vector<int>>>& lists) {
  lamatch::Instance inst;
  for (std::size_t a = 0; a < lists.size(); ++a) inst.add_applicant("a" + std::to_string(a + 1), 1);
  for (int p = 0; p < posts; ++p) inst.add_post("p" + std::to_string(p + 1), 1);
  for (std::size_t a = 0; a < lists.size(); ++a) inst.set_preferences(static_cast<int>(a), lists[a]);
  return inst;
}

}  // namespace fixtures
