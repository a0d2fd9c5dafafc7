#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace mssr {

using Rational = boost::rational<std::int64_t>;

/// Parses "3", "-1", "1/2" or a finite decimal such as "0.25" (converted exactly).
/// Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& value);

inline double to_double(const Rational& value) {
  return static_cast<double>(value.numerator()) / static_cast<double>(value.denominator());
}

/// N^q for a rational exponent; exact for integer exponents while the result fits a double.
double power_of(std::int64_t base, const Rational& exponent);

/// Shortest decimal text that parses back to the same double.
std::string format_decimal(double value);

/// Parses a decimal with std::from_chars; throws std::invalid_argument on trailing junk.
double parse_decimal(std::string_view text);

}  // namespace mssr
