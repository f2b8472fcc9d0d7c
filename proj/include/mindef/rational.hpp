#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mindef {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "12", "-3", "7.389056", "1e-5", "2.5E3" or "5/2" into an exact
/// rational. Throws ParseError (line 0) on malformed text.
Rational parse_rational(std::string_view text);

/// Shortest exact text: an integer, a terminating decimal, or "p/q".
std::string format_rational(const Rational& value);

double to_double(const Rational& value);

/// Best rational approximation of `value` with denominator at most
/// `max_denominator` (continued-fraction convergents and semiconvergents).
Rational rationalize(double value, const Integer& max_denominator);

Rational pow(const Rational& base, unsigned exponent);

inline bool is_zero(const Rational& value) { return sgn(value) == 0; }

std::vector<double> to_doubles(std::span<const Rational> values);

}  // namespace mindef
