#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace sponge {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "0.25", "-3", "1e-3", "3/4". Throws ParseError.
Rational parse_rational(const std::string& text);

/// Exact value of a finite double (every double is a dyadic rational).
Rational rational_from_double(double x);

/// Rational of the shortest decimal that round-trips to x (0.1 -> 1/10).
Rational rational_from_shortest(double x);

double to_double(const Rational& r);

/// "num/den" or "num" when den == 1.
std::string to_string(const Rational& r);

}  // namespace sponge
