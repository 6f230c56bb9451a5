#include "threshold_lab/certifier.hpp"

#include <algorithm>
#include <bit>

#include "threshold_lab/errors.hpp"

namespace threshold_lab {
namespace {

constexpr unsigned long kPowerCap = 4096;

Rational make(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

void require_exponent_at_least_one(const Rational& exponent) {
  if (exponent < 1) throw ValidationError("exponent L must be at least 1, got " + to_fraction_string(exponent));
}

// Rational lower bound on sqrt(pi * 2^(i-1)).
Rational sqrt_pi_block_lower(int i) {
  const auto& c = certified_constants();
  const int e = i - 1;
  Rational out = c.sqrt_pi_lower;
  if (e % 2 == 0) {
    out *= pow(Rational(2), static_cast<unsigned long>(e / 2));
  } else {
    out *= c.sqrt2_lower * pow(Rational(2), static_cast<unsigned long>((e - 1) / 2));
  }
  return out;
}

}  // namespace

const CertifiedConstants& certified_constants() {
  static const CertifiedConstants constants = [] {
    CertifiedConstants c;
    // e = 2.718281828459045..., pi = 3.141592653589793...
    c.e_lower = parse_rational("2.718281828");
    c.e_upper = parse_rational("2.718281829");
    c.pi_lower = parse_rational("3.141592653");
    c.sqrt_pi_lower = sqrt_lower(c.pi_lower, 30);
    c.sqrt2_lower = sqrt_lower(Rational(2), 30);
    return c;
  }();
  return constants;
}

Rational binom_tail_weight(int ell, int m, const Rational& exponent) {
  if (ell < 0 || m < 0) throw ValidationError("binomial tail weight needs ell, m >= 0");
  require_exponent_at_least_one(exponent);
  Rational total = 0;
  for (int j = std::max(m, 0); j <= ell; ++j) {
    total += Rational(binomial(static_cast<unsigned long>(ell), static_cast<unsigned long>(j))) /
             pow(exponent, static_cast<unsigned long>(j));
  }
  return total;
}

Rational inner_sum_exact(int i, const Rational& exponent) {
  if (i < 1 || i > 24) throw ValidationError("exact block evaluation supports 1 <= i <= 24");
  require_exponent_at_least_one(exponent);
  const unsigned long n = 1ul << (i - 1);
  const unsigned long big_n = 2 * n - 1;
  const unsigned long span = big_n - n;
  const BigInt& a = exponent.get_num();
  const BigInt& b = exponent.get_den();
  // sum_{j=n}^{N} binom(N,j) (b/a)^j = b^n R / a^N, with
  // R = sum_t binom(N, n+t) b^t a^(span-t) evaluated Horner-style from t = span.
  BigInt coeff = 1;  // binom(N, N)
  BigInt r = coeff;
  BigInt a_power = 1;
  for (unsigned long k = 1; k <= span; ++k) {
    const unsigned long j = big_n - k + 1;  // current coeff is binom(N, j)
    coeff = coeff * j / (big_n - j + 1);    // binom(N, j - 1)
    a_power *= a;
    r = r * b + coeff * a_power;
  }
  BigInt b_n, a_big_n;
  mpz_pow_ui(b_n.get_mpz_t(), b.get_mpz_t(), n);
  mpz_pow_ui(a_big_n.get_mpz_t(), a.get_mpz_t(), big_n);
  Rational out(b_n * r, a_big_n);
  out.canonicalize();
  return out;
}

Rational inner_sum_bound(int i, const Rational& exponent) {
  if (i < 1 || i > 62) throw ValidationError("block bound supports 1 <= i <= 62");
  if (exponent < 4) throw ValidationError("central-binomial block bound needs L >= 4");
  const unsigned long n = 1ul << (i - 1);
  const Rational ratio = Rational(4) / exponent;
  const Rational power = pow(ratio, std::min(n, kPowerCap));
  const Rational one_minus_inv = Rational(1) - Rational(1) / exponent;
  Rational out = power / (Rational(2) * sqrt_pi_block_lower(i) * one_minus_inv);
  out.canonicalize();
  return out;
}

Rational tail_bound(int i_start, const Rational& exponent) {
  if (exponent < 4) {
    throw ValidationError("tail bound needs L >= 4 (got " + to_fraction_string(exponent) +
                          "); extend i_max instead");
  }
  // 1 / (1 - r) with r = 1/sqrt2_lower >= 1/sqrt(2).
  const Rational r = Rational(1) / certified_constants().sqrt2_lower;
  Rational out = inner_sum_bound(i_start, exponent) / (Rational(1) - r);
  out.canonicalize();
  return out;
}

std::string to_string(TermKind kind) {
  switch (kind) {
    case TermKind::first_term: return "first-term-upper";
    case TermKind::exact: return "exact";
    case TermKind::bound: return "block-upper";
  }
  return "unknown";
}

CertificateReport series_rhs(const Schedule& schedule, int i_max, int exact_limit) {
  if (i_max < 2) throw ValidationError("series truncation needs i_max >= 2");
  if (exact_limit < 1 || exact_limit > 24) throw ValidationError("exact limit must lie in [1, 24]");
  if (i_max > 62) throw ValidationError("series truncation supports i_max <= 62");
  const auto& c = certified_constants();
  const Rational half = make(1, 2);

  CertificateReport rep;
  rep.schedule = schedule.describe();
  rep.i_max = i_max;
  rep.exact_limit = exact_limit;

  const Rational& first_exponent = schedule.at(1);
  const Rational first = Rational(2) / (c.e_lower * first_exponent);
  Rational lower = Rational(2) / (c.e_upper * first_exponent);
  rep.terms.push_back({1, first_exponent, TermKind::first_term, first});
  rep.partial_sum = first;

  bool certified = true;
  for (int i = 2; i <= i_max; ++i) {
    const Rational& exponent = schedule.at(i);
    if (i <= exact_limit) {
      Rational v = inner_sum_exact(i, exponent);
      lower += v;
      rep.partial_sum += v;
      rep.terms.push_back({i, exponent, TermKind::exact, std::move(v)});
      if (!rep.exceeds_half_at && lower > half) {
        rep.exceeds_half_at = i;
        rep.lower_partial_at_exceed = lower;
      }
    } else if (exponent >= 4) {
      Rational v = inner_sum_bound(i, exponent);
      rep.partial_sum += v;
      rep.terms.push_back({i, exponent, TermKind::bound, std::move(v)});
    } else {
      certified = false;
      break;
    }
  }
  rep.partial_sum.canonicalize();

  const Rational tail_exponent = schedule.min_from(i_max + 1);
  if (certified && tail_exponent >= 4) {
    rep.tail = tail_bound(i_max + 1, tail_exponent);
    rep.total_upper = rep.partial_sum + *rep.tail;
    rep.total_upper->canonicalize();
    rep.below_half = *rep.total_upper < half;
  }
  return rep;
}

int block_of(long long j) {
  if (j < 1) throw ValidationError("block index needs j >= 1");
  return std::bit_width(static_cast<unsigned long long>(j));
}

ClosedFormCheck closed_form_L6() {
  ClosedFormCheck out;
  const Rational l(6);
  const Rational ratio = Rational(4) / l;
  const Rational geometric = pow(ratio, 5) / (Rational(2) * (Rational(1) - ratio));
  out.value = Rational(1) / l + Rational(3) / pow(l, 2) + Rational(1) / pow(l, 3) + Rational(35) / pow(l, 4) + geometric;
  out.value.canonicalize();
  out.equals_23_48 = out.value == make(23, 48);
  out.below_half = out.value < make(1, 2);

  // Each j >= 1 sits in exactly one block i, with coefficient binom(2^i - 1, j).
  for (int j = 1; j <= 4; ++j) {
    const int i = block_of(j);
    out.coefficients.push_back(binomial((1ul << i) - 1, static_cast<unsigned long>(j)));
  }
  out.bound_checked_through = 256;
  out.coefficient_bound_holds = true;
  for (int j = 5; j <= out.bound_checked_through; ++j) {
    const int i = block_of(j);
    const BigInt actual = binomial((1ul << i) - 1, static_cast<unsigned long>(j));
    const BigInt central = binomial(2ul * static_cast<unsigned long>(j) - 1, static_cast<unsigned long>(j));
    BigInt power;
    mpz_ui_pow_ui(power.get_mpz_t(), 2, 2ul * static_cast<unsigned long>(j) - 1);
    if (!(actual <= central && central <= power)) out.coefficient_bound_holds = false;
  }

  out.series_upper_direct = geometric;
  for (int j = 1; j <= 4; ++j) {
    out.series_upper_direct += Rational(out.coefficients[static_cast<std::size_t>(j - 1)]) / pow(l, static_cast<unsigned long>(j));
  }
  out.series_upper_direct.canonicalize();
  return out;
}

}  // namespace threshold_lab
