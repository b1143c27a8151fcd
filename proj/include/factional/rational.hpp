#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace factional {

// Arbitrary-precision exact rational. All thresholds, probabilities and
// revolt fractions in the library are carried in this type so that the weak
// inequalities (>= p, >= mu) are decided exactly.
using Rational = mpq_class;
using BigInt = mpz_class;

// Accepts "num/den", plain integers ("3", "-2") and finite decimals
// ("0.005", "1e-3"). Throws Error{kParse} on anything else or a zero
// denominator.
Rational ParseRational(std::string_view text);

// Canonical "num/den" form; the denominator is always written, e.g. "0/1".
std::string FormatRational(const Rational& value);

// Correctly rounded (half away from zero) fixed-point decimal with `digits`
// fractional digits.
std::string FormatDecimal(const Rational& value, int digits = 12);

double ToDouble(const Rational& value);

// num / den in lowest terms. den must be nonzero.
Rational Ratio(const BigInt& num, const BigInt& den);

// Exact power with a non-negative exponent.
Rational Pow(const Rational& base, unsigned exponent);

// Binomial coefficient C(n, k); zero when k > n.
BigInt Binomial(unsigned n, unsigned k);

// Smallest integer >= value.
BigInt Ceil(const Rational& value);

}  // namespace factional
