#pragma once

#include <optional>
#include <string>
#include <vector>

#include "threshold_lab/fragmentation.hpp"
#include "threshold_lab/rational.hpp"

namespace threshold_lab {

// One-sided rational bounds on the irrational constants. Every use is in the
// direction that keeps the certified total an upper bound.
struct CertifiedConstants {
  Rational e_lower;      // 2.718281828 <= e   (e = 2.71828182845904...)
  Rational e_upper;      // e <= 2.718281829
  Rational pi_lower;     // 3.141592653 <= pi  (pi = 3.14159265358979...)
  Rational sqrt_pi_lower;
  Rational sqrt2_lower;
};

const CertifiedConstants& certified_constants();

/// sum_{j=m}^{ell} binom(ell, j) / L^j exactly; 0 when m > ell.
Rational binom_tail_weight(int ell, int m, const Rational& exponent);

/// Block i of the series: sum_{j=2^(i-1)}^{2^i-1} binom(2^i-1, j) / L^j, exactly.
Rational inner_sum_exact(int i, const Rational& exponent);

/// Upper bound on block i for L >= 4 via binom(2n-1, n) < 2^(2n-1)/sqrt(pi n)
/// and a geometric sum over j >= n = 2^(i-1):
///   (4/L)^n / (2 sqrt(pi n) (1 - 1/L)).
/// (4/L)^n is replaced by (4/L)^min(n, 4096), which is no smaller.
Rational inner_sum_bound(int i, const Rational& exponent);

/// Upper bound on sum_{i >= i_start} of block i with every L_i >= L >= 4.
/// Consecutive block bounds shrink by at least 1/sqrt(2), so the tail is the
/// first block bound over (1 - 1/sqrt(2)). Throws ValidationError for L < 4.
Rational tail_bound(int i_start, const Rational& exponent);

enum class TermKind { first_term, exact, bound };
std::string to_string(TermKind kind);

struct SeriesTerm {
  int i = 0;
  Rational exponent;
  TermKind kind = TermKind::exact;
  Rational value;
};

struct CertificateReport {
  std::string schedule;
  int i_max = 0;
  int exact_limit = 0;
  std::vector<SeriesTerm> terms;
  Rational partial_sum;                 // first term + blocks 2..i_max (upper bounds)
  std::optional<Rational> tail;         // blocks > i_max; absent when some L_i < 4 there
  std::optional<Rational> total_upper;  // partial_sum + tail
  bool below_half = false;              // total_upper < 1/2, exactly
  // Certified lower bound on first term + blocks 2..i, for the first i at
  // which it already exceeds 1/2 (if any, among exactly computed blocks).
  std::optional<int> exceeds_half_at;
  std::optional<Rational> lower_partial_at_exceed;
};

/// Certified upper bound on 2/(e L_1) + sum_{i>=2} block_i(L_i) and its
/// comparison with 1/2. Blocks up to min(i_max, exact_limit) are exact,
/// blocks up to i_max beyond that use inner_sum_bound, the rest tail_bound.
CertificateReport series_rhs(const Schedule& schedule, int i_max = 30, int exact_limit = 14);

struct ClosedFormCheck {
  Rational value;                     // 1/6 + 3/36 + 1/216 + 35/1296 + (4/6)^5 / (2 (1 - 4/6))
  bool equals_23_48 = false;
  bool below_half = false;
  std::vector<BigInt> coefficients;   // coefficient of L^-j for j = 1..4, from binomials
  bool coefficient_bound_holds = false;  // binom(2^i-1, j) <= binom(2j-1, j) <= 2^(2j-1), j = 5..bound_checked_through
  int bound_checked_through = 0;
  Rational series_upper_direct;       // sum_{j<=4} c_j 6^-j + sum_{j>=5} 2^(2j-1) 6^-j from the series
};

/// The constant-6 closed form, recomputed from binomials.
ClosedFormCheck closed_form_L6();

/// Index of the block containing exponent j >= 1: the i with 2^(i-1) <= j < 2^i.
int block_of(long long j);

}  // namespace threshold_lab
