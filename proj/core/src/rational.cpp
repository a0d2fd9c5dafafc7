#include "mssr/rational.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace mssr {

namespace {

std::int64_t parse_integer(std::string_view text) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = parse_integer(text.substr(0, slash));
    const auto den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string digits(text.substr(0, dot));
    std::string fraction(text.substr(dot + 1));
    if (fraction.empty() || fraction.size() > 15) {
      throw std::invalid_argument("unsupported decimal rational '" + std::string(text) + "'");
    }
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < fraction.size(); ++i) scale *= 10;
    const bool negative = !digits.empty() && digits.front() == '-';
    if (digits.empty() || digits == "-" || digits == "+") digits += '0';
    const auto whole = parse_integer(digits);
    const auto frac = parse_integer(fraction);
    const auto magnitude = (whole < 0 ? -whole : whole) * scale + frac;
    return Rational(negative ? -magnitude : magnitude, scale);
  }
  return Rational(parse_integer(text));
}

std::string to_string(const Rational& value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());
  return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

double power_of(std::int64_t base, const Rational& exponent) {
  const auto b = static_cast<double>(base);
  if (exponent.denominator() == 1) {
    auto e = exponent.numerator();
    const bool invert = e < 0;
    if (invert) e = -e;
    double result = 1.0;
    double factor = b;
    while (e > 0) {
      if (e & 1) result *= factor;
      factor *= factor;
      e >>= 1;
    }
    return invert ? 1.0 / result : result;
  }
  return std::pow(b, to_double(exponent));
}

std::string format_decimal(double value) {
  std::array<char, 64> buffer{};
  auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("cannot format decimal");
  return std::string(buffer.data(), ptr);
}

double parse_decimal(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw std::invalid_argument("not a decimal: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace mssr
