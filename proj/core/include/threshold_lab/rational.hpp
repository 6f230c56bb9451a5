#pragma once

#include <string>
#include <string_view>

#include <gmpxx.h>

namespace threshold_lab {

// Arbitrary-precision exact arithmetic. mpq_class keeps values canonical
// (reduced, positive denominator) after every arithmetic operation.
using BigInt = mpz_class;
using Rational = mpq_class;

// Accepts "9/2", "4.5", "4", "-0.125".
Rational parse_rational(std::string_view text);

std::string to_fraction_string(const Rational& x);
// x rounded toward -infinity to `digits` decimal places.
std::string to_decimal_string(const Rational& x, int digits = 12);
double to_double(const Rational& x);

Rational pow(const Rational& base, unsigned long exponent);
BigInt binomial(unsigned long n, unsigned long k);

// Rational bounds on sqrt(x), x >= 0, with resolution 10^-digits:
// sqrt_lower(x) <= sqrt(x) <= sqrt_upper(x).
Rational sqrt_lower(const Rational& x, int digits = 30);
Rational sqrt_upper(const Rational& x, int digits = 30);

}  // namespace threshold_lab
