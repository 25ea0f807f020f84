#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace volcone {

/// Exact arbitrary-precision rational. All lattice arithmetic runs on this type.
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// Parses "p/q", "p", or a finite decimal such as "-0.125" into an exact rational.
/// Throws ParseError on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form, or "p" when the denominator is one.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Decimal rendering with `significant` significant digits.
std::string to_decimal(const Rational& value, int significant = 12);

/// Exact rational p / 2^bits nearest below `value`; used to pin float inputs to exact points.
Rational dyadic_floor(double value, int bits = 40);

/// num / den in canonical form; den must be nonzero.
Rational ratio(long num, long den);

Rational abs(const Rational& value);

/// Returns the exact square root when `value` is the square of a rational.
bool exact_sqrt(const Rational& value, Rational& root);

std::string to_string(const RationalVector& values);

}  // namespace volcone
