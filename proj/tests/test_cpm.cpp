#include <gtest/gtest.h>

#include <iostream>

#include "fixtures.hpp"

using namespace lamatch;

namespace {

std::vector<std::string> post_names(const Instance& inst, const std::vector<int>& ids) {
  std::vector<std::string> out;
  for (int p : ids) out.push_back(inst.post(p).name);
  return out;
}

}  // namespace

TEST(LastResort, AppendsOnePostPerApplicant) {
  Instance inst = fixtures::example();
  Instance aug = add_last_resorts(inst);
  ASSERT_EQ(aug.post_count(), 10);
  EXPECT_EQ(aug.post(5).name, "last_a1");
  EXPECT_EQ(aug.post(9).name, "last_a5");
  EXPECT_EQ(aug.post(7).quota, 1);
  EXPECT_EQ(aug.rank_of(0, 5), 3);  // a1 ranks p1 ; p4 ; last_a1
  EXPECT_EQ(aug.rank_of(2, 7), 2);  // a3 has a single tied group
  EXPECT_FALSE(aug.rank_of(0, 6).has_value());
  EXPECT_EQ(aug.classes().size(), inst.classes().size());
}

TEST(LastResort, NameCollision) {
  Instance inst = fixtures::plain(1, {{{0}}});
  inst.add_post("last_a1", 1);
  Instance aug = add_last_resorts(inst);
  EXPECT_EQ(aug.post(2).name, "_last_a1");
}

TEST(LastResort, RejectsManyToMany) {
  Instance inst = fixtures::plain(2, {{{0}, {1}}});
  Instance quota = inst;
  quota.add_applicant("x", 2);
  quota.set_preferences(1, {{0}});
  EXPECT_THROW(add_last_resorts(quota), Error);
  Instance classes = inst;
  classes.add_class(Side::applicant, 0, {0, 1}, 1);
  try {
    solve_cpm(classes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_many_to_one);
  }
}

TEST(Cpm, ExampleInstance) {
  Instance inst = fixtures::example();
  PopularResult r = solve_cpm(inst);
  ASSERT_TRUE(r.exists);
  EXPECT_TRUE(is_feasible(inst, r.matching));
  EXPECT_TRUE(oracle_is_popular(inst, r.matching));
  EXPECT_TRUE(verify_popular_characterization(inst, r.matching));
  EXPECT_EQ(r.rank_one_flow, 3);
  EXPECT_EQ(r.rank_one_count, 3);
  EXPECT_EQ(r.signature.to_string(), "(3, 1)");
  ASSERT_EQ(r.unmatched.size(), 1u);
  EXPECT_EQ(inst.applicant(r.unmatched[0]).name, "a2");
  EXPECT_EQ(r.augmented_matching.size(), 5u);
}

TEST(Cpm, ExampleMatchingIsPopular) {
  Instance inst = fixtures::example();
  Matching m = fixtures::example_m(inst);
  EXPECT_TRUE(oracle_is_popular(inst, m));
  EXPECT_TRUE(verify_popular_characterization(inst, m));
  EXPECT_FALSE(verify_popular_characterization(inst, fixtures::example_mprime(inst)) &&
               is_feasible(inst, fixtures::example_mprime(inst)));
}

TEST(Cpm, ExampleFirstAndSecondSets) {
  Instance inst = fixtures::example();
  Instance aug = add_last_resorts(inst);
  RankOnePhase phase = compute_fs_sets(aug);
  EXPECT_EQ(phase.flow_value, 3);
  using V = std::vector<std::string>;
  EXPECT_EQ(post_names(aug, phase.sets.first[2]), (V{"p1", "p2", "p3"}));
  EXPECT_EQ(post_names(aug, phase.sets.first[0]), (V{"p1"}));
  EXPECT_EQ(post_names(aug, phase.sets.second[0]), (V{"p4"}));
  EXPECT_EQ(post_names(aug, phase.sets.second[1]), (V{"last_a2"}));
  EXPECT_EQ(post_names(aug, phase.sets.second[2]), V{});
  EXPECT_EQ(post_names(aug, phase.sets.second[3]), (V{"p1"}));
  EXPECT_EQ(post_names(aug, phase.sets.second[4]), (V{"p2"}));
  // a3's tree root is not in S: all of its rank-1 posts may be contested.
  EXPECT_FALSE(phase.decomposition.in(phase.graph->layout().root(Side::applicant, 2), Part::S));
}

TEST(Cpm, PlacementBetweenFirstAndSecondFails) {
  Instance inst = fixtures::plain(3, {{{0}, {1}, {2}}, {{0}}, {{1}}});
  Instance aug = add_last_resorts(inst);
  RankOnePhase phase = compute_fs_sets(aug);
  EXPECT_EQ(phase.sets.first[0], (std::vector<int>{0}));
  EXPECT_EQ(phase.sets.second[0], (std::vector<int>{2}));
  Matching middle = fixtures::by_name(inst, {{"a1", "p2"}, {"a2", "p1"}});
  EXPECT_TRUE(is_feasible(inst, middle));
  EXPECT_FALSE(verify_popular_characterization(inst, middle));
  EXPECT_FALSE(oracle_is_popular(inst, middle));
  Matching good = fixtures::by_name(inst, {{"a1", "p3"}, {"a2", "p1"}, {"a3", "p2"}});
  EXPECT_TRUE(verify_popular_characterization(inst, good));
  EXPECT_TRUE(oracle_is_popular(inst, good));
}

TEST(Cpm, ThreeIdenticalListsHaveNoPopularMatching) {
  Instance inst = fixtures::plain(3, {{{0}, {1}, {2}}, {{0}, {1}, {2}}, {{0}, {1}, {2}}});
  EXPECT_FALSE(solve_cpm(inst).exists);
  EXPECT_FALSE(oracle_popular(inst).exists);
}

TEST(Cpm, TwoApplicantsShareTwoPosts) {
  Instance inst = fixtures::plain(2, {{{0}, {1}}, {{0}, {1}}});
  PopularResult r = solve_cpm(inst);
  ASSERT_TRUE(r.exists);
  EXPECT_EQ(r.signature.to_string(), "(1, 1)");
  EXPECT_TRUE(oracle_is_popular(inst, r.matching));
}

TEST(CpmProperty, AgreesWithOracleBothWays) {
  int exists = 0;
  int none = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    Instance inst = seed % 2 ? fixtures::random_small(seed, true) : fixtures::random_contested(seed);
    PopularResult r = solve_cpm(inst, seed % 2 ? NeighborOrder::ascending : NeighborOrder::descending);
    PopularSearchResult o = oracle_popular(inst, fixtures::random_cap);
    ASSERT_EQ(r.exists, o.exists) << "seed " << seed;
    if (r.exists) {
      ++exists;
      EXPECT_TRUE(is_feasible(inst, r.matching)) << "seed " << seed;
      EXPECT_TRUE(oracle_is_popular(inst, r.matching, fixtures::random_cap)) << "seed " << seed;
      EXPECT_TRUE(verify_popular_characterization(inst, r.matching)) << "seed " << seed;
    } else {
      ++none;
    }
  }
  EXPECT_GT(exists, 0);
  EXPECT_GT(none, 0);
}

TEST(CpmProperty, CharacterizationMatchesBruteForce) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Instance inst = seed % 2 ? fixtures::random_small(seed, true) : fixtures::random_contested(seed);
    auto check = [&](const Matching& m) {
      EXPECT_EQ(verify_popular_characterization(inst, m), oracle_is_popular(inst, m, fixtures::random_cap))
          << "seed " << seed;
    };
    enumerate_feasible(inst, check, fixtures::random_cap);
  }
}
