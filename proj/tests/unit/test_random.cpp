#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <set>

#include "mssr/random.hpp"

using namespace mssr;

// Known-answer vectors of the Random123 reference implementation
TEST_CASE("philox4x32-10 known answers") {
  using C = std::array<std::uint32_t, 4>;
  using K = std::array<std::uint32_t, 2>;
  CHECK(philox4x32(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  PhiloxStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    CHECK(x == b());
    seen.insert(x);
    seen.insert(c());
    seen.insert(d());
  }
  CHECK(seen.size() == 3000);
}

TEST_CASE("uniform draws lie in (0, 1] with the right moments") {
  PhiloxStream rng(1, 0);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform_open();
    REQUIRE(u > 0.0);
    REQUIRE(u <= 1.0);
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sum2 / n - 1.0 / 3.0) < 0.005);
}

TEST_CASE("exponential draws have mean 1/rate") {
  PhiloxStream rng(9, 3);
  const int n = 200000;
  const double rate = 2.5;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rng.exponential(rate);
  CHECK(std::abs(sum / n - 1.0 / rate) < 4.0 / rate / std::sqrt(static_cast<double>(n)));
}
