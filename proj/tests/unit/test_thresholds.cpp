#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "threshold_lab/cover_solver.hpp"
#include "threshold_lab/errors.hpp"
#include "threshold_lab/product_measure.hpp"
#include "threshold_lab/thresholds.hpp"

using namespace threshold_lab;

namespace {

SetFamily fam(int n, std::initializer_list<std::initializer_list<int>> sets) {
  std::vector<SubsetMask> members;
  for (auto s : sets) members.push_back(SubsetMask::of(s));
  return SetFamily(GroundSet(n), std::move(members));
}

constexpr double kTol = 1e-6;

void expect_brackets(const ThresholdResult& r, double truth, double tol) {
  EXPECT_LE(r.hi - r.lo, tol);
  EXPECT_LE(r.lo, truth + 1e-12);
  EXPECT_GE(r.hi, truth - 1e-12);
}

}  // namespace

TEST(ProbThreshold, Singleton) { expect_brackets(prob_threshold(fam(1, {{0}}), kTol), 0.5, kTol); }

TEST(ProbThreshold, FullSet) {
  expect_brackets(prob_threshold(fam(4, {{0, 1, 2, 3}}), kTol), std::pow(2.0, -0.25), kTol);
}

// 3p^2(1-p) + p^3 = 1/2 at p = 1/2.
TEST(ProbThreshold, TrianglePairs) {
  expect_brackets(prob_threshold(fam(3, {{0, 1}, {0, 2}, {1, 2}}), kTol), 0.5, kTol);
}

TEST(ProbThreshold, RejectsTrivialFamilies) {
  EXPECT_THROW(prob_threshold(fam(3, {}), kTol), ValidationError);
  EXPECT_THROW(prob_threshold(fam(3, {{}, {0}}), kTol), ValidationError);
  EXPECT_THROW(prob_threshold(fam(3, {{0}}), 0.0), ValidationError);
}

TEST(ProbThreshold, CapAndFallback) {
  const auto f = fam(25, {{0, 1}, {2}});
  EXPECT_THROW(prob_threshold(f, 1e-3), CapExceeded);
  MonteCarloParams mc;
  mc.trials = 20000;
  mc.seed = 4;
  const auto r = prob_threshold(f, 1e-3, ThresholdMode::exact, mc, {}, true);
  EXPECT_EQ(r.mode, ThresholdMode::monte_carlo);
  // Pr = 1 - (1-p)(1-p^2) crosses 1/2 near 0.4534.
  EXPECT_LE(r.lo, 0.4534 + 0.02);
  EXPECT_GE(r.hi, 0.4534 - 0.02);
}

TEST(ProbThreshold, MonteCarloMarksUnresolved) {
  MonteCarloParams mc;
  mc.trials = 500;
  mc.seed = 2;
  const auto r = prob_threshold(fam(1, {{0}}), 1e-6, ThresholdMode::monte_carlo, mc);
  EXPECT_TRUE(r.unresolved);
  EXPECT_GT(r.hi - r.lo, 1e-6);
  EXPECT_LE(r.lo, 0.5);
  EXPECT_GE(r.hi, 0.5);
}

TEST(ExpectationThreshold, Singleton) { expect_brackets(expectation_threshold(fam(1, {{0}}), kTol), 0.5, kTol); }

TEST(ExpectationThreshold, FullSetEqualsProbabilityThreshold) {
  for (int n : {1, 2, 4, 6}) {
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[i] = i;
    const SetFamily f(GroundSet(n), {SubsetMask::of(all)});
    const auto pc = prob_threshold(f, kTol);
    const auto qc = expectation_threshold(f, kTol);
    expect_brackets(qc, std::pow(2.0, -1.0 / n), kTol);
    EXPECT_NEAR(pc.lo, qc.lo, kTol);
  }
}

// c_q = min(3q^2, q + q^2, 2q, 1); the minimum is 3q^2 near the crossing, so
// q_c = sqrt(1/6).
TEST(ExpectationThreshold, TrianglePairs) {
  const auto r = expectation_threshold(fam(3, {{0, 1}, {0, 2}, {1, 2}}), kTol);
  expect_brackets(r, std::sqrt(1.0 / 6.0), kTol);
}

TEST(Thresholds, BracketInvariantAndOrdering) {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 6);
    const auto f = oracle::to_family(n, oracle::random_members(gen, n, 1 + static_cast<int>(gen() % 5), 3));
    const auto pc = prob_threshold(f, 1e-5);
    const auto qc = expectation_threshold(f, 1e-5);
    ASSERT_LE(prob_upset_exact(f, ProbVector::uniform(n, pc.lo)), 0.5);
    ASSERT_GT(prob_upset_exact(f, ProbVector::uniform(n, pc.hi)), 0.5);
    ASSERT_LE(exact_cost(f, ProbVector::uniform(n, qc.lo)).cost, 0.5 + kCostSlack);
    ASSERT_GT(exact_cost(f, ProbVector::uniform(n, qc.hi)).cost, 0.5);
    ASSERT_LE(qc.lo, pc.hi + 2e-5);
    const auto pm = prob_threshold(minimal_elements(f), 1e-5);
    ASSERT_EQ(pm.lo, pc.lo);
  }
}

TEST(KkGap, Examples) {
  const auto full = kk_gap_report(fam(4, {{0, 1, 2, 3}}), kTol);
  EXPECT_EQ(full.ell, 4);
  EXPECT_NEAR(full.ratio_bound, 1.0, 1e-4);
  EXPECT_TRUE(full.pass);

  const auto single = kk_gap_report(fam(1, {{0}}), kTol);
  EXPECT_EQ(single.ell, 1);
  EXPECT_NEAR(single.kk_bound_log7ell, 4 * std::log2(7.0), 1e-12);
  EXPECT_NEAR(single.kk_bound_log7ell, 11.229, 1e-3);
  EXPECT_NEAR(single.kk_bound_4k7, 11.0, 1e-12);
  EXPECT_TRUE(single.pass);
}
