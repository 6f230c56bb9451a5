#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "threshold_lab/caps.hpp"
#include "threshold_lab/rng.hpp"
#include "threshold_lab/sets.hpp"

namespace threshold_lab {

/// Per-element probabilities, each strictly inside (0, 1).
class ProbVector {
 public:
  explicit ProbVector(std::vector<double> values);
  static ProbVector uniform(int n, double p);

  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  std::span<const double> values() const { return values_; }
  bool is_uniform() const;

  // q^S: product of the entries over the elements of s.
  double monomial(SubsetMask s) const;
  // mu_p(W) over a ground set of the vector's size.
  double outcome_probability(SubsetMask w) const;

 private:
  std::vector<double> values_;
};

struct ProbEstimate {
  double point = 0.0;
  double lo = 0.0;
  double hi = 1.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double confidence = 0.0;
};

SubsetMask sample(const ProbVector& p, CounterRng& rng);

/// e_q(F): sum over members of q^S, the expected number of members inside X_q.
double expected_hits(const SetFamily& family, const ProbVector& q);

/// Pr[X_p in up-closure(F)] by enumerating all 2^n outcomes. Throws
/// CapExceeded above caps.exact_ground.
double prob_upset_exact(const SetFamily& family, const ProbVector& p, const Caps& caps = {});

/// Number of sets of each size in the up-closure of F (index = size). Under a
/// uniform p the up-closure probability is sum_k counts[k] p^k (1-p)^(n-k).
std::vector<std::uint64_t> upset_size_profile(const SetFamily& family, const Caps& caps = {});
double prob_from_profile(std::span<const std::uint64_t> profile, double p);

/// Half-width of the two-sided Hoeffding interval for a mean of `trials`
/// [0,1]-valued draws at the given confidence.
double hoeffding_halfwidth(std::uint64_t trials, double confidence);

/// Monte Carlo estimate of Pr[X_p in up-closure(F)]. Trial t samples from
/// stream t of `seed`, so the result does not depend on `threads`.
ProbEstimate prob_upset_mc(const SetFamily& family, const ProbVector& p, std::uint64_t trials, std::uint64_t seed,
                           double confidence = 0.99, int threads = 1);

}  // namespace threshold_lab
