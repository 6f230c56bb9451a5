#include "threshold_lab/rational.hpp"

#include <cctype>

#include "threshold_lab/errors.hpp"

namespace threshold_lab {
namespace {

BigInt power_of_ten(int digits) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  return out;
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string original(text);
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational out;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw ValidationError("not a rational number: '" + original + "'");
    const BigInt d{std::string(den)};
    if (d == 0) throw ValidationError("zero denominator in '" + original + "'");
    out = Rational(BigInt{std::string(num)}, d);
  } else {
    const auto dot = text.find('.');
    const auto whole = text.substr(0, dot);
    const auto frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac)) || (dot != std::string_view::npos && frac.empty())) {
      throw ValidationError("not a rational number: '" + original + "'");
    }
    const BigInt digits{std::string(whole.empty() ? "0" : whole) + std::string(frac)};
    out = Rational(digits, power_of_ten(static_cast<int>(frac.size())));
  }
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

std::string to_fraction_string(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string to_decimal_string(const Rational& x, int digits) {
  const BigInt scale = power_of_ten(digits);
  const BigInt scaled = floor_div(x.get_num() * scale, x.get_den());
  BigInt abs_scaled = abs(scaled);
  std::string s = abs_scaled.get_str();
  if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
  if (digits > 0) s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  return (scaled < 0 ? "-" : "") + s;
}

double to_double(const Rational& x) { return x.get_d(); }

Rational pow(const Rational& base, unsigned long exponent) {
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), exponent);
  Rational out(num, den);
  out.canonicalize();
  return out;
}

BigInt binomial(unsigned long n, unsigned long k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

Rational sqrt_lower(const Rational& x, int digits) {
  if (x < 0) throw ValidationError("sqrt of a negative rational");
  const BigInt scale = power_of_ten(digits);
  // floor(sqrt(floor(x * scale^2))) / scale
  const BigInt radicand = floor_div(x.get_num() * scale * scale, x.get_den());
  BigInt root;
  mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
  Rational out(root, scale);
  out.canonicalize();
  return out;
}

Rational sqrt_upper(const Rational& x, int digits) {
  Rational lo = sqrt_lower(x, digits);
  Rational step(1, power_of_ten(digits));
  step.canonicalize();
  Rational out = lo + step;
  // lo is within one step of the root from below, so lo + step is above it
  // unless lo is the exact root.
  if (lo * lo == x) out = lo;
  return out;
}

}  // namespace threshold_lab
