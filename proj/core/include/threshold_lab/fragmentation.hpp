#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "threshold_lab/caps.hpp"
#include "threshold_lab/product_measure.hpp"
#include "threshold_lab/rational.hpp"
#include "threshold_lab/sets.hpp"

namespace threshold_lab {

/// Amplification exponents L_1, L_2, ... for the rounds of the fragmentation
/// process. Values are exact rationals, each at least 1.
class Schedule {
 public:
  enum class Kind { standard, constant, custom };

  // 5 for i <= 7, 4 afterwards.
  static Schedule standard();
  static Schedule constant(Rational value);
  // L_i = values[i-1]; the last value repeats for larger i.
  static Schedule custom(std::vector<Rational> values);
  // "standard", "const:4.5", "const:9/2", "custom:5,5,4".
  static Schedule parse(std::string_view descriptor);

  Kind kind() const { return kind_; }
  const Rational& at(int i) const;
  double value(int i) const { return to_double(at(i)); }
  // L_1 + ... + L_k
  Rational sum(int k) const;
  // Smallest L_i over all i >= start.
  Rational min_from(int start) const;
  std::string describe() const;

 private:
  Schedule(Kind kind, std::vector<Rational> values);
  Kind kind_;
  std::vector<Rational> values_;  // standard: {5 x7, 4}
};

/// F(H, W) = {S \ W : S in H}, deduplicated.
SetFamily fragments(const SetFamily& family, SubsetMask revealed);

/// Inclusion-minimal fragments. Equals {∅} exactly when W contains a member.
SetFamily minimal_fragments(const SetFamily& family, SubsetMask revealed);

struct FragmentSplit {
  SetFamily large;  // minimal fragments with at least m elements
  SetFamily small;  // the rest
};

FragmentSplit split_large_small(const SetFamily& family, SubsetMask revealed, int m);

/// Componentwise 1 - (1 - q_x)^L: the marginal of a union of L independent
/// samples of X_q. Results that round to 1 are clamped just below it.
ProbVector amplify(const ProbVector& q, double exponent);

/// Number of rounds floor(log2(2 ell)) for ell >= 1.
int process_rounds(int ell);

struct RoundRecord {
  int round = 0;           // i
  int m = 0;               // 2^(k-i)
  int schedule_index = 0;  // k+1-i
  double exponent = 0.0;   // L_(k+1-i)
  SubsetMask sample;       // W_i
  std::size_t size_before = 0;
  std::size_t size_after = 0;
  int ell_after = 0;       // largest member of H_i
  std::size_t large_size = 0;
  // Filled when costs are requested and the cover solver stays within caps.
  std::optional<double> large_cost;
  std::optional<double> cost_before;
  std::optional<double> cost_after;
};

struct ProcessTrace {
  std::uint64_t trial = 0;
  int ell = 0;
  int k = 0;
  std::vector<RoundRecord> rounds;
  SubsetMask union_sample;  // W
  bool event_e = false;     // H_k == {∅}
  bool member_hit = false;  // W in <H>
  std::optional<double> z;  // sum of large-part costs
  bool costs_requested = false;
  bool costs_available = false;
};

/// One run of the k-round process: H_0 = minimal(H), and round i samples W_i
/// from amplify(q, L_(k+1-i)) on stream process_stream(trial, i) of `seed`,
/// then keeps the minimal fragments smaller than 2^(k-i).
ProcessTrace run_process(const SetFamily& family, const ProbVector& q, const Schedule& schedule, std::uint64_t seed,
                         std::uint64_t trial = 0, bool compute_costs = false, const Caps& caps = {});

/// sum_{j=m}^{ell} binom(ell, j) / L^j in floating point (0 when m > ell).
double binom_tail_weight_real(int ell, int m, double exponent);

struct Lemma1Check {
  double lhs = 0.0;          // E[c_q(L_m(H, X_p))] by full enumeration
  double rhs = 0.0;          // Pr[X_p in <H>] * tail weight
  double prob_member = 0.0;
  double tail_weight = 0.0;
  int ell = 0;
  std::size_t distinct_large_families = 0;
  bool verdict = false;
};

/// Exact check of E[c_q(L_m(H, X_p))] <= Pr[X_p in <H>] * sum_{j>=m} binom(ell,j) L^-j
/// with p = amplify(q, L).
Lemma1Check verify_lemma1(const SetFamily& family, const ProbVector& q, double exponent, int m,
                          const Caps& caps = {});

struct Lemma2Check {
  double lhs = 0.0;    // c_q(H) * prod (1 - q_h)^L
  double bound = 0.0;  // 1 / (e L)
  bool verdict = false;
};

/// For a 1-bounded family of singletons, E[c_q(L_1(H, X_p))] <= 1/(eL).
Lemma2Check verify_lemma2(const SetFamily& family, const ProbVector& q, double exponent, const Caps& caps = {});

}  // namespace threshold_lab
