#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace cak {

/// Arbitrary-precision rational, always in canonical form.
using Rational = mpq_class;

/// "n" for integers, "n/d" otherwise.
std::string to_string(const Rational& r);
/// Decimal rendering rounded to `digits` fractional digits.
std::string to_decimal(const Rational& r, int digits = 6);
/// Parses "n", "-n" or "n/d"; throws SyntaxError.
Rational parse_rational(std::string_view text);

bool is_integer(const Rational& r);
Rational floor(const Rational& r);
Rational ceil(const Rational& r);

}  // namespace cak
