#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace medimax {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q" or "p" (optionally signed). Throws std::invalid_argument on
/// malformed input or zero denominator.
Rational parse_rational(const std::string& text);

/// Canonical "p/q" form; integers render as "p/1" so round-trips are uniform.
std::string format_rational(const Rational& value);

/// value^e for integer e (negative e requires value != 0).
Rational rational_pow(const Rational& value, long exponent);

/// Exact conversion of a finite double into a rational.
Rational rational_from_double(double value);

double to_double(const Rational& value);

/// floor(a/b) for integers, b > 0.
Int floor_div(const Int& a, const Int& b);

Int floor_rational(const Rational& value);
Int ceil_rational(const Rational& value);

}  // namespace medimax
