#include "threshold_lab/thresholds.hpp"

#include <cmath>
#include <functional>

#include "threshold_lab/cover_solver.hpp"
#include "threshold_lab/errors.hpp"
#include "threshold_lab/product_measure.hpp"

namespace threshold_lab {
namespace {

void check_tol(double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw ValidationError("tolerance must lie in (0,1)");
}

// Bisection on a nondecreasing map: keep map(lo) <= 1/2 < map(hi).
ThresholdResult bisect(const std::function<double(double)>& map, double tol, ThresholdMode mode) {
  ThresholdResult r;
  r.mode = mode;
  r.lo = kBracketEpsilon;
  r.hi = 1.0 - kBracketEpsilon;
  if (!(map(r.lo) <= 0.5) || map(r.hi) <= 0.5) {
    throw ValidationError("threshold map does not cross 1/2 inside (0,1); family is trivial");
  }
  while (r.hi - r.lo > tol) {
    const double mid = 0.5 * (r.lo + r.hi);
    (map(mid) <= 0.5 ? r.lo : r.hi) = mid;
    ++r.iterations;
  }
  r.value_at_midpoint = map(0.5 * (r.lo + r.hi));
  return r;
}

ThresholdResult bisect_monte_carlo(const SetFamily& minimal, double tol, const MonteCarloParams& mc) {
  const int n = minimal.ground_size();
  ThresholdResult r;
  r.mode = ThresholdMode::monte_carlo;
  r.lo = kBracketEpsilon;
  r.hi = 1.0 - kBracketEpsilon;
  std::uint64_t step = 0;
  while (r.hi - r.lo > tol) {
    const double mid = 0.5 * (r.lo + r.hi);
    const auto est = prob_upset_mc(minimal, ProbVector::uniform(n, mid), mc.trials, mc.seed + step, mc.confidence,
                                   mc.threads);
    ++step;
    r.value_at_midpoint = est.point;
    if (est.hi <= 0.5) {
      r.lo = mid;
    } else if (est.lo > 0.5) {
      r.hi = mid;
    } else {
      r.unresolved = true;
      break;
    }
    ++r.iterations;
  }
  return r;
}

}  // namespace

std::string to_string(ThresholdMode mode) { return mode == ThresholdMode::exact ? "exact" : "monte-carlo"; }

void require_nontrivial(const SetFamily& family) {
  const SetFamily minimal = minimal_elements(family);
  if (minimal.empty()) throw ValidationError("family is trivial: its up-closure is empty");
  if (minimal.has_empty_member()) throw ValidationError("family is trivial: it contains the empty set");
}

ThresholdResult prob_threshold(const SetFamily& family, double tol, ThresholdMode mode, const MonteCarloParams& mc,
                               const Caps& caps, bool mc_fallback) {
  check_tol(tol);
  require_nontrivial(family);
  const SetFamily minimal = minimal_elements(family);
  if (mode == ThresholdMode::exact && minimal.ground_size() > caps.exact_ground) {
    if (!mc_fallback) {
      throw CapExceeded("exact p_c needs n <= " + std::to_string(caps.exact_ground) +
                        "; use Monte Carlo mode or raise exact_ground");
    }
    mode = ThresholdMode::monte_carlo;
  }
  if (mode == ThresholdMode::monte_carlo) return bisect_monte_carlo(minimal, tol, mc);
  const auto profile = upset_size_profile(minimal, caps);
  return bisect([&](double p) { return prob_from_profile(profile, p); }, tol, ThresholdMode::exact);
}

ThresholdResult expectation_threshold(const SetFamily& family, double tol, const Caps& caps) {
  check_tol(tol);
  require_nontrivial(family);
  const SetFamily minimal = minimal_elements(family);
  const int n = minimal.ground_size();
  return bisect([&](double q) { return exact_cost(minimal, ProbVector::uniform(n, q), caps).cost; }, tol,
                ThresholdMode::exact);
}

KkGapReport kk_gap_report(const SetFamily& family, double tol, const Caps& caps) {
  KkGapReport r;
  r.pc = prob_threshold(family, tol, ThresholdMode::exact, {}, caps);
  r.qc = expectation_threshold(family, tol, caps);
  r.ell = bound_ell(minimal_elements(family)).ell;
  r.ratio_bound = r.pc.hi / r.qc.lo;
  r.kk_bound_log7ell = 4.0 * std::log2(7.0 * r.ell);
  r.kk_bound_4k7 = 4.0 * std::log2(2.0 * r.ell) + 7.0;
  r.pass_log7ell = r.ratio_bound <= r.kk_bound_log7ell;
  r.pass_4k7 = r.ratio_bound <= r.kk_bound_4k7;
  r.pass = r.pass_log7ell && r.pass_4k7;
  return r;
}

}  // namespace threshold_lab
