#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "fixtures.hpp"

using namespace lamatch;

namespace {

bool same(const Signature& x, const Signature& y) { return compare_signatures(x, y) == std::strong_ordering::equal; }

// Copy of `inst` where every applicant keeps only its first `k` rank groups.
Instance truncated(const Instance& inst, int k) {
  Instance out;
  for (const Vertex& v : inst.applicants()) out.add_applicant(v.name, v.quota);
  for (const Vertex& v : inst.posts()) out.add_post(v.name, v.quota);
  for (int a = 0; a < inst.applicant_count(); ++a) {
    auto groups = inst.preferences(a);
    if (static_cast<int>(groups.size()) > k) groups.resize(static_cast<std::size_t>(k));
    out.set_preferences(a, groups);
  }
  for (const ClassDef& c : inst.classes()) {
    std::vector<int> members;
    for (int w : c.members) {
      int a = c.owner_side == Side::post ? w : c.owner;
      int p = c.owner_side == Side::post ? c.owner : w;
      auto r = inst.rank_of(a, p);
      if (r && *r <= k) members.push_back(w);
    }
    if (!members.empty()) out.add_class(c.owner_side, c.owner, members, c.quota);
  }
  return out;
}

}  // namespace

TEST(Crmm, ExampleInstance) {
  Instance inst = fixtures::example();
  for (NeighborOrder order : {NeighborOrder::ascending, NeighborOrder::descending}) {
    CrmmResult r = solve_crmm(inst, order);
    EXPECT_EQ(r.signature.to_string(), "(3, 2)");
    EXPECT_TRUE(is_feasible(inst, r.matching));
    ASSERT_EQ(r.trace.iterations.size(), 2u);
    EXPECT_EQ(r.trace.iterations[0].flow_value, 3);
    EXPECT_EQ(r.trace.iterations[1].flow_value, 2);
  }
  // The ascending-order flow lands on the matching in data/example_m.txt.
  EXPECT_EQ(solve_crmm(inst).matching.pairs().size(), 5u);
  EXPECT_TRUE(std::ranges::equal(solve_crmm(inst).matching.pairs(), fixtures::example_m(inst).pairs()));
}

TEST(Crmm, ExampleInstanceSecondIteration) {
  Instance inst = fixtures::example();
  CrmmResult r = solve_crmm(inst);
  const IterationRecord& second = r.trace.iterations[1];
  EXPECT_EQ(second.rl_counts, (std::vector<int>{3, 2}));
  EXPECT_TRUE(second.pruned_edges.empty());
  EXPECT_EQ(second.deleted_arcs.size(), 4u);
  EXPECT_EQ(r.trace.iterations[0].pruned_edges, (std::vector<int>{*inst.edge_index(1, 4)}));
}

TEST(Crmm, SingleEdge) {
  Instance inst = fixtures::plain(1, {{{0}}});
  CrmmResult r = solve_crmm(inst);
  EXPECT_EQ(r.signature.to_string(), "(1)");
  EXPECT_EQ(r.matching.size(), 1u);
}

TEST(Crmm, ClassicalPromotion) {
  // a2 only wants p1, so a1 must settle for its second choice.
  Instance inst = fixtures::plain(2, {{{0}, {1}}, {{0}}});
  CrmmResult r = solve_crmm(inst);
  EXPECT_EQ(r.signature.to_string(), "(1, 1)");
  EXPECT_TRUE(r.matching.contains(Pair{0, 1}));
  EXPECT_TRUE(r.matching.contains(Pair{1, 0}));
}

TEST(Crmm, RankMaximalBeatsMaximumCardinality) {
  // Matching all three needs a1 on rank 3; rank-maximal prefers (2, 0, 0).
  Instance inst = fixtures::plain(2, {{{0}, {1}}, {{1}}, {{0}}});
  CrmmResult r = solve_crmm(inst);
  EXPECT_EQ(r.signature.to_string(), "(2, 0)");
}

TEST(Crmm, Rejections) {
  Instance bad = fixtures::example();
  bad.add_class(Side::post, 0, {2, 3}, 1);
  try {
    solve_crmm(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::non_laminar);
  }
  Instance zero = fixtures::plain(1, {{{0}}});
  zero.add_class(Side::post, 0, {0}, 0);
  EXPECT_THROW(solve_crmm(zero), Error);
}

TEST(CrmmProperty, MatchesOracleOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    Instance inst = fixtures::random_small(seed, seed % 3 == 0);
    CrmmResult r = solve_crmm(inst, seed % 2 ? NeighborOrder::ascending : NeighborOrder::descending);
    ASSERT_TRUE(is_feasible(inst, r.matching)) << "seed " << seed;
    auto [best, witness] = oracle_rmm_signature(inst);
    EXPECT_TRUE(same(r.signature, best)) << "seed " << seed << ": " << r.signature.to_string() << " vs "
                                         << best.to_string();
  }
}

TEST(CrmmProperty, ClassicalCaseMatchesOracle) {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    GeneratorParams params = fixtures::small_params(true);
    params.max_post_quota = 1;
    params.class_probability = 0;
    Instance inst = random_instance(seed, params);
    EXPECT_TRUE(same(solve_crmm(inst).signature, oracle_rmm_signature(inst).first)) << "seed " << seed;
  }
}

TEST(CrmmProperty, IterationInvariants) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Instance inst = fixtures::random_small(seed);
    CrmmResult r = solve_crmm(inst);
    int total_flow = 0;
    std::vector<int> frozen;
    for (const IterationRecord& rec : r.trace.iterations) {
      total_flow += rec.flow_value;
      EXPECT_EQ(std::accumulate(rec.rl_counts.begin(), rec.rl_counts.end(), 0), total_flow) << "seed " << seed;
      for (std::size_t j = 0; j < frozen.size(); ++j) EXPECT_EQ(rec.rl_counts[j], frozen[j]) << "seed " << seed;
      frozen.push_back(rec.rl_counts[static_cast<std::size_t>(rec.rank - 1)]);
      EXPECT_TRUE(rec.min_cut_ok) << "seed " << seed;
      EXPECT_FALSE(rec.preference_arc_deleted) << "seed " << seed;
      EXPECT_EQ(rec.one_sided_deletion_failures, 0) << "seed " << seed;
      // After rank k the R -> L arcs form a rank-maximal matching of ranks <= k.
      Signature prefix = oracle_rmm_signature(truncated(inst, rec.rank)).first;
      Signature counts{rec.rl_counts};
      counts.counts.resize(static_cast<std::size_t>(rec.rank));
      EXPECT_TRUE(same(counts, prefix)) << "seed " << seed << " rank " << rec.rank;
    }
  }
}

TEST(CrmmProperty, PrunedEdgesAreInNoRankMaximalMatching) {
  int pruned_seen = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Instance inst = fixtures::random_small(seed);
    CrmmResult r = solve_crmm(inst);
    std::set<int> pruned;
    for (const IterationRecord& rec : r.trace.iterations) pruned.insert(rec.pruned_edges.begin(), rec.pruned_edges.end());
    pruned_seen += static_cast<int>(pruned.size());
    enumerate_feasible(inst, [&](const Matching& m) {
      if (!same(signature_of(inst, m), r.signature)) return;
      for (const Pair& pr : m.pairs()) {
        EXPECT_FALSE(pruned.count(*inst.edge_index(pr.applicant, pr.post))) << "seed " << seed;
      }
    });
  }
  EXPECT_GT(pruned_seen, 0);
}
