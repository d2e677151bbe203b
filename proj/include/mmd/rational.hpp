#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace mmd {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "0.8", "4/5", "1e-3" or "-2" exactly.
Rational parse_rational(std::string_view text);

/// The exact rational denoted by the shortest decimal that round-trips to
/// `value` (0.1 -> 1/10, not the binary expansion).
Rational rational_from_double(double value);

double to_double(const Rational& r);
long double to_long_double(const Rational& r);

Rational pow(const Rational& base, unsigned exponent);

std::string to_string(const Rational& r);

}  // namespace mmd
