#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace qcap {

/// Exact rational with arbitrary-precision numerator and denominator, always reduced.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "a", "a/b" or a finite decimal such as "0.25". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical text: "a" for integers, otherwise "a/b" with b > 0.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

}  // namespace qcap
