#include "factional/rational.hpp"

#include <cctype>
#include <cstdlib>

#include "factional/error.hpp"

namespace factional {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kInvalidAgent: return "invalid-agent";
    case ErrorKind::kImpossibleContext: return "impossible-context";
    case ErrorKind::kMislabeledStates: return "mislabeled-states";
    case ErrorKind::kNotTwoStates: return "not-two-states";
    case ErrorKind::kSpaceTooLarge: return "space-too-large";
    case ErrorKind::kBudgetExceeded: return "budget-exceeded";
    case ErrorKind::kNotGraphical: return "not-graphical";
    case ErrorKind::kAttemptCapExceeded: return "attempt-cap-exceeded";
    case ErrorKind::kParse: return "parse-error";
    case ErrorKind::kInternal: return "internal-error";
  }
  return "unknown";
}

namespace {

bool IsDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt ParseInteger(std::string_view text, std::string_view whole) {
  std::string_view digits = text;
  bool negative = false;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
    negative = digits.front() == '-';
    digits.remove_prefix(1);
  }
  if (!IsDigits(digits)) {
    Fail(ErrorKind::kParse, "not a rational number: '" + std::string(whole) + "'");
  }
  BigInt value(std::string(digits), 10);
  return negative ? BigInt(-value) : value;
}

}  // namespace

Rational ParseRational(std::string_view text) {
  std::string_view trimmed = text;
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front()))) {
    trimmed.remove_prefix(1);
  }
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) {
    trimmed.remove_suffix(1);
  }
  if (trimmed.empty()) Fail(ErrorKind::kParse, "empty rational");

  if (auto slash = trimmed.find('/'); slash != std::string_view::npos) {
    BigInt num = ParseInteger(trimmed.substr(0, slash), text);
    std::string_view den_text = trimmed.substr(slash + 1);
    if (!IsDigits(den_text)) {
      Fail(ErrorKind::kParse, "bad denominator in '" + std::string(text) + "'");
    }
    BigInt den(std::string(den_text), 10);
    if (den == 0) Fail(ErrorKind::kParse, "zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  // Decimal with optional exponent.
  std::string_view mantissa = trimmed;
  long exponent = 0;
  if (auto e = trimmed.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = trimmed.substr(0, e);
    BigInt exp_value = ParseInteger(trimmed.substr(e + 1), text);
    if (!exp_value.fits_slong_p() || abs(exp_value) > 4096) {
      Fail(ErrorKind::kParse, "exponent out of range in '" + std::string(text) + "'");
    }
    exponent = exp_value.get_si();
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
    negative = mantissa.front() == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = mantissa.substr(0, dot);
    std::string_view frac_part = mantissa.substr(dot + 1);
    if ((int_part.empty() && frac_part.empty()) ||
        (!int_part.empty() && !IsDigits(int_part)) ||
        (!frac_part.empty() && !IsDigits(frac_part))) {
      Fail(ErrorKind::kParse, "not a rational number: '" + std::string(text) + "'");
    }
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!IsDigits(mantissa)) {
      Fail(ErrorKind::kParse, "not a rational number: '" + std::string(text) + "'");
    }
    digits = std::string(mantissa);
  }
  BigInt num(digits, 10);
  if (negative) num = -num;
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational r = exponent < 0 ? Rational(num, scale) : Rational(num * scale);
  r.canonicalize();
  return r;
}

std::string FormatRational(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string FormatDecimal(const Rational& value, int digits) {
  if (digits < 0) digits = 0;
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  BigInt num = abs(value.get_num()) * scale;
  BigInt den = value.get_den();
  BigInt q = num / den;
  BigInt r = num - q * den;
  if (2 * r >= den) q += 1;

  std::string s = q.get_str();
  if (static_cast<int>(s.size()) <= digits) {
    s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
  }
  if (digits > 0) s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  if (sgn(value) < 0 && q != 0) s.insert(0, "-");
  return s;
}

double ToDouble(const Rational& value) { return value.get_d(); }

Rational Ratio(const BigInt& num, const BigInt& den) {
  if (den == 0) Fail(ErrorKind::kInvalidArgument, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational Pow(const Rational& base, unsigned exponent) {
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

BigInt Binomial(unsigned n, unsigned k) {
  BigInt result;
  if (k > n) return BigInt(0);
  mpz_bin_uiui(result.get_mpz_t(), n, k);
  return result;
}

BigInt Ceil(const Rational& value) {
  BigInt result;
  mpz_cdiv_q(result.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return result;
}

}  // namespace factional
