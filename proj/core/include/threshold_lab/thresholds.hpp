#pragma once

#include <cstdint>
#include <string>

#include "threshold_lab/caps.hpp"
#include "threshold_lab/sets.hpp"

namespace threshold_lab {

enum class ThresholdMode { exact, monte_carlo };
std::string to_string(ThresholdMode mode);

// Interval [lo, hi] bracketing a threshold under uniform probabilities. The
// defining predicate holds at lo and fails at hi.
struct ThresholdResult {
  double lo = 0.0;
  double hi = 1.0;
  ThresholdMode mode = ThresholdMode::exact;
  int iterations = 0;
  // Probability (p_c) or q-cost (q_c) evaluated at the final midpoint.
  double value_at_midpoint = 0.0;
  // Monte Carlo only: bisection stopped because the estimate's confidence
  // interval straddled 1/2.
  bool unresolved = false;
};

struct MonteCarloParams {
  std::uint64_t trials = 20000;
  std::uint64_t seed = 1;
  double confidence = 0.99;
  int threads = 1;
};

// Lower and upper ends of the initial bracket are kBracketEpsilon and 1 - kBracketEpsilon.
inline constexpr double kBracketEpsilon = 1e-9;

/// Throws ValidationError unless minimal(F) is nonempty and the empty set is not a member.
void require_nontrivial(const SetFamily& family);

/// p_c = sup{p : Pr[X_p in <F>] <= 1/2}. Exact mode enumerates outcomes and
/// throws CapExceeded past caps.exact_ground unless `mc_fallback` is set. In
/// Monte Carlo mode step t uses seed + t.
ThresholdResult prob_threshold(const SetFamily& family, double tol, ThresholdMode mode = ThresholdMode::exact,
                               const MonteCarloParams& mc = {}, const Caps& caps = {}, bool mc_fallback = false);

/// q_c = sup{q : c_q(F) <= 1/2}, by bisection on the exact q-cost.
ThresholdResult expectation_threshold(const SetFamily& family, double tol, const Caps& caps = {});

struct KkGapReport {
  int ell = 0;
  ThresholdResult pc;
  ThresholdResult qc;
  double ratio_bound = 0.0;        // pc.hi / qc.lo
  double kk_bound_log7ell = 0.0;   // 4 log2(7 ell)
  double kk_bound_4k7 = 0.0;       // 4 log2(2 ell) + 7
  bool pass_log7ell = false;
  bool pass_4k7 = false;
  bool pass = false;
};

KkGapReport kk_gap_report(const SetFamily& family, double tol, const Caps& caps = {});

}  // namespace threshold_lab
