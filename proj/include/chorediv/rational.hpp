#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace chorediv {

/// Arbitrary-precision rational. Every entitlement and cost in the exact
/// core is one of these; doubles only appear in the bounds calculus.
using Rational = mpq_class;

/// Parses "p", "p/q", or a decimal such as "0.125" / "-1.5e-3" exactly.
/// Throws ParseError on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical text: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Largest power of two (possibly negative exponent) that is <= value.
/// Requires value > 0.
Rational floor_power_of_two(const Rational& value);

/// True iff value == 2^k for some integer k (k may be negative).
bool is_power_of_two(const Rational& value);

/// True iff value is a nonnegative integer power of two (1, 2, 4, ...).
bool is_integral_power_of_two(const Rational& value);

}  // namespace chorediv
