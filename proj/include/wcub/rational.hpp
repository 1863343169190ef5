#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace wcub {

using Rational = boost::multiprecision::cpp_rational;

// Parses "3", "-0.25", "1/8" or "1e-3" into an exact rational.
[[nodiscard]] Rational parse_rational(std::string_view text);

[[nodiscard]] inline double to_double(double x) { return x; }
[[nodiscard]] inline double to_double(const Rational& x) { return x.convert_to<double>(); }

// "1/2", "-3", "0".
[[nodiscard]] std::string to_string(const Rational& x);

} // namespace wcub
