#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "threshold_lab/cover_solver.hpp"
#include "threshold_lab/errors.hpp"

using namespace threshold_lab;

namespace {

SetFamily fam(int n, std::initializer_list<std::initializer_list<int>> sets) {
  std::vector<SubsetMask> members;
  for (auto s : sets) members.push_back(SubsetMask::of(s));
  return SetFamily(GroundSet(n), std::move(members));
}

SetFamily all_pairs_of_three() { return fam(3, {{0, 1}, {0, 2}, {1, 2}}); }

void expect_valid(const SetFamily& h, const ProbVector& q, const CoverSolution& sol) {
  EXPECT_TRUE(is_cover(sol.cover, h));
  EXPECT_NEAR(sol.cost, expected_hits(sol.cover, q), 1e-15);
}

}  // namespace

TEST(ExactCost, Singleton) {
  const auto h = fam(2, {{1}});
  const auto q = ProbVector({0.5, 0.3});
  const auto sol = exact_cost(h, q);
  EXPECT_NEAR(sol.cost, 0.3, 1e-15);
  EXPECT_EQ(sol.cover, fam(2, {{1}}));
  EXPECT_EQ(sol.status, CoverStatus::exact_optimal);
}

TEST(ExactCost, EmptySetMember) {
  const auto sol = exact_cost(fam(3, {{}}), ProbVector::uniform(3, 0.3));
  EXPECT_EQ(sol.cost, 1.0);
  EXPECT_EQ(sol.cover, fam(3, {{}}));
}

TEST(ExactCost, EmptyFamily) {
  const auto sol = exact_cost(fam(3, {}), ProbVector::uniform(3, 0.3));
  EXPECT_EQ(sol.cost, 0.0);
  EXPECT_TRUE(sol.cover.empty());
}

// Candidate covers of the three pairs: the pairs themselves (3 q^2 = 0.27),
// {0},{1,2} (0.39), {0},{1} (0.6), {∅} (1).
TEST(ExactCost, TrianglePairs) {
  const auto h = all_pairs_of_three();
  const auto q = ProbVector::uniform(3, 0.3);
  const auto sol = exact_cost(h, q);
  EXPECT_NEAR(sol.cost, 0.27, 1e-15);
  EXPECT_EQ(sol.cover, h);
  expect_valid(h, q, sol);
}

TEST(ExactCost, PrefersFewerSetsOnTies) {
  // {0} covers both members at the same cost as {0,1} + {0,2} when
  // q0 = q0 q1 + q0 q2, i.e. q1 + q2 = 1.
  const auto h = fam(3, {{0, 1}, {0, 2}});
  const auto q = ProbVector({0.4, 0.25, 0.75});
  const auto sol = exact_cost(h, q);
  EXPECT_NEAR(sol.cost, 0.4, 1e-15);
  EXPECT_EQ(sol.cover, fam(3, {{0}}));
}

TEST(ExactCost, BranchAndBoundAgreesWithDp) {
  std::mt19937_64 gen(3);
  Caps bb;
  bb.dp_members = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(gen() % 6);
    const auto f = oracle::to_family(n, oracle::random_members(gen, n, 2 + static_cast<int>(gen() % 7), 3));
    const auto q = ProbVector::uniform(n, 0.1 + 0.05 * static_cast<double>(gen() % 16));
    const auto dp = exact_cost(f, q);
    const auto branch = exact_cost(f, q, bb);
    ASSERT_EQ(branch.path, SolverPath::branch_and_bound);
    ASSERT_NEAR(dp.cost, branch.cost, 1e-12);
    expect_valid(f, q, branch);
  }
}

TEST(ExactCost, CapsDirectToGreedy) {
  // 21 disjoint pairs: 21 minimal members.
  std::vector<SubsetMask> members;
  for (int i = 0; i < 21; ++i) members.push_back(SubsetMask::of({2 * i, 2 * i + 1}));
  const SetFamily h(GroundSet(42), members);
  const auto q = ProbVector::uniform(42, 0.2);
  Caps caps;
  caps.bb_members = 20;
  EXPECT_THROW(exact_cost(h, q, caps), CapExceeded);
  caps.bb_members = 64;
  const auto sol = exact_cost(h, q, caps);
  EXPECT_EQ(sol.path, SolverPath::branch_and_bound);
  EXPECT_NEAR(sol.cost, 21 * 0.04, 1e-12);
  caps.bb_nodes = 3;
  EXPECT_THROW(exact_cost(h, q, caps), CapExceeded);
}

TEST(CandidatePool, ContainsAllSubsetsOfMembers) {
  const auto pool = candidate_pool(all_pairs_of_three());
  // ∅, three singletons, three pairs.
  ASSERT_EQ(pool.size(), 7u);
  EXPECT_EQ(pool.front().set, SubsetMask{});
  EXPECT_EQ(pool.front().coverage, 0b111u);
}

TEST(CandidatePool, PruningDropsDominated) {
  // {0} costs 0.01 and covers both members, so ∅ goes. {1} and {2} cover no
  // more than the cheaper pairs containing them.
  const auto h = fam(3, {{0, 1}, {0, 2}});
  const auto q = ProbVector({0.01, 0.5, 0.5});
  std::vector<SubsetMask> kept;
  for (const auto& c : pruned_candidate_pool(h, q)) kept.push_back(c.set);
  std::sort(kept.begin(), kept.end(), canonical_less);
  EXPECT_EQ(kept, (std::vector<SubsetMask>{SubsetMask::of({0}), SubsetMask::of({0, 1}), SubsetMask::of({0, 2})}));
}

TEST(GreedyCost, Examples) {
  const auto q = ProbVector({0.5, 0.3});
  const auto sol = greedy_cost(fam(2, {{1}}), q);
  EXPECT_NEAR(sol.cost, 0.3, 1e-15);
  EXPECT_EQ(sol.status, CoverStatus::upper_bound);
  EXPECT_EQ(greedy_cost(fam(2, {}), q).cost, 0.0);
  EXPECT_EQ(greedy_cost(fam(2, {{}}), q).cost, 1.0);
}

TEST(GreedyCost, HandlesLargeFamilies) {
  // 63-element member: too big for the full subset pool.
  const SetFamily h(GroundSet(63), {GroundSet(63).full(), SubsetMask::of({0, 1})});
  const auto q = ProbVector::uniform(63, 0.9);
  const auto sol = greedy_cost(h, q);
  EXPECT_TRUE(is_cover(sol.cover, h));
  EXPECT_LE(sol.cost, 1.0);
}

TEST(IsQSmall, Examples) {
  const auto a = is_q_small(fam(2, {{1}}), ProbVector({0.5, 0.3}));
  EXPECT_TRUE(a.small);
  EXPECT_NEAR(a.solution.cost, 0.3, 1e-15);
  EXPECT_FALSE(is_q_small(fam(3, {{}}), ProbVector::uniform(3, 0.3)).small);
  const auto x = is_q_small(fam(3, {{0, 1, 2}}), ProbVector::uniform(3, 0.9));
  EXPECT_FALSE(x.small);
  EXPECT_NEAR(x.solution.cost, 0.729, 1e-12);
}

TEST(ExactCostRational, MatchesFloatingPoint) {
  const auto h = all_pairs_of_three();
  const std::vector<Rational> q(3, Rational(3, 10));
  const auto sol = exact_cost_rational(h, q);
  EXPECT_EQ(sol.cost, Rational(27, 100));
  EXPECT_EQ(sol.cover, h);
}

TEST(CoverProperty, OracleAndInvariants) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 250; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 7);
    const auto raw = oracle::random_members(gen, n, 1 + static_cast<int>(gen() % 6), std::min(n, 3));
    const auto h = oracle::to_family(n, raw);
    std::vector<double> qv(static_cast<std::size_t>(n));
    for (auto& x : qv) x = 0.05 + 0.9 * std::uniform_real_distribution<double>()(gen);
    const ProbVector q(qv);
    const auto sol = exact_cost(h, q);
    expect_valid(h, q, sol);
    ASSERT_NEAR(sol.cost, oracle::cover_cost_brute(oracle::bits_of(minimal_elements(h)), qv), 1e-12);
    ASSERT_LE(sol.cost, std::min(1.0, expected_hits(minimal_elements(h), q)) + 1e-12);
    ASSERT_GE(greedy_cost(h, q).cost, sol.cost - 1e-12);

    // Subadditivity on a random split.
    std::vector<std::uint64_t> left, right;
    for (auto s : raw) (gen() & 1 ? left : right).push_back(s);
    const double split_sum = exact_cost(oracle::to_family(n, left), q).cost + exact_cost(oracle::to_family(n, right), q).cost;
    ASSERT_LE(sol.cost, split_sum + 1e-12);
  }
}

TEST(CoverProperty, MonotoneInUniformQ) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + static_cast<int>(gen() % 5);
    const auto h = oracle::to_family(n, oracle::random_members(gen, n, 1 + static_cast<int>(gen() % 6), 3));
    double previous = 0.0;
    for (int step = 1; step < 20; ++step) {
      const double c = exact_cost(h, ProbVector::uniform(n, step / 20.0)).cost;
      ASSERT_GE(c, previous - 1e-12);
      previous = c;
    }
  }
}

TEST(RationalCost, AcceptsUnreducedInputs) {
  std::vector<Rational> q = {Rational(16, 20), Rational(6, 20), Rational(4, 20), Rational(8, 20)};
  const auto h = fam(4, {{1}, {0, 3}, {2, 3}});
  EXPECT_EQ(exact_cost_rational(h, q).cost, Rational(7, 10));
}
