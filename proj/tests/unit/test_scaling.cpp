#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mssr/error.hpp"
#include "mssr/projection.hpp"
#include "mssr/scaling.hpp"
#include "support.hpp"

using namespace mssr;
using mssr::testing::bundled;

namespace {

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("futile cycle orders") {
  const ScaledSystem sys(bundled("futile.net"), 1000);
  CHECK(sys.theta0() == Rational(1));
  CHECK(sys.gamma() == Rational(-1));
  CHECK(intensity_order(sys, "r1") == Rational(1));
  CHECK(intensity_order(sys, "r7") == Rational(0));
  const auto c = classify_reactions(sys);
  CHECK(c.negligible == std::vector<std::string>{"r7", "r8"});
  CHECK(c.dominant.size() == 8);
}

TEST_CASE("scale-free network has order zero everywhere") {
  const ScaledSystem sys(parse_network("species A alpha=0 z0=3\nreaction a: A -> 0 kappa=1 beta=0\n"
                                       "reaction b: 0 -> A kappa=2 beta=0\n"),
                         500);
  CHECK(sys.theta0() == Rational(0));
  CHECK(intensity_order(sys, "a") == Rational(0));
  CHECK(intensity_order(sys, "b") == Rational(0));
}

TEST_CASE("single reaction is dominant") {
  const ScaledSystem sys(parse_network("species X alpha=1 z0=2\nreaction only: 2 X -> 0 kappa=1 beta=1/2\n"), 100);
  CHECK(sys.theta0() == Rational(5, 2));
  CHECK(classify_reactions(sys).dominant == std::vector<std::string>{"only"});
  CHECK(classify_reactions(sys).negligible.empty());
}

TEST_CASE("Lotka network is entirely dominant at order zero") {
  const ScaledSystem sys(bundled("lotka.net"), 1000);
  CHECK(sys.theta0() == Rational(0));
  CHECK(classify_reactions(sys).negligible.empty());
}

TEST_CASE("yeast network has dominant set r5, r7") {
  const ScaledSystem sys(bundled("yeast.net"), 1000);
  CHECK(sys.theta0() == Rational(1));
  CHECK(sorted(classify_reactions(sys).dominant) == std::vector<std::string>{"r5", "r7"});
}

TEST_CASE("factor order conventions") {
  const auto net = parse_network(R"(
species L alpha=0 z0=1
species H alpha=2 z0=4
species E alpha=1 z0=0
reaction sq: H -> 0 kappa=1 beta=0 law=sqrt(H)
reaction hl: H -> 0 kappa=1 beta=0 law=hill(H,2)
reaction lg: H -> 0 kappa=1 beta=0 law=log1p(H)
reaction pw: H -> 0 kappa=1 beta=0 law=pow(H,3)
reaction lo: L -> 0 kappa=1 beta=1 law=pow(L,5)
reaction dg: E -> 0 kappa=1 beta=0
)");
  const ScaledSystem sys(net, 100);
  CHECK(intensity_order(sys, "sq") == Rational(1));
  CHECK(intensity_order(sys, "hl") == Rational(0));
  CHECK(intensity_order(sys, "lg") == Rational(0));
  CHECK(intensity_order(sys, "pw") == Rational(6));
  CHECK(intensity_order(sys, "lo") == Rational(1));
  CHECK_FALSE(intensity_order(sys, "dg").has_value());
  CHECK_FALSE(sys.is_dominant(net.reaction_index("dg")));
  CHECK_FALSE(sys.warnings().empty());
}

TEST_CASE("scaled intensity examples") {
  const auto net = parse_network("species A alpha=0 z0=2\nspecies B alpha=1 z0=1\nreaction r: A + B -> 0 kappa=1 beta=-1\n");
  const ScaledSystem sys(net, 100, Rational(-1));
  CHECK(scaled_intensity(sys, "r", ScaledState{{2}, {1.0}}) == doctest::Approx(0.02).epsilon(1e-14));
  CHECK(scaled_intensity(sys, "r", ScaledState{{0}, {1.0}}) == 0.0);

  for (std::int64_t N : {100, 10000}) {
    const ScaledSystem futile(bundled("futile.net"), N);
    CHECK(scaled_intensity(futile, "r1", futile.initial_state()) == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("dominant intensities converge at the initial state") {
  for (const auto* name : {"futile.net", "yeast.net", "p53.net", "lotka.net", "projection_example.net"}) {
    CAPTURE(name);
    const ScaledSystem small(bundled(name), 1000);
    const ScaledSystem large(bundled(name), 1000000);
    for (std::size_t k = 0; k < small.network().reaction_count(); ++k) {
      if (!small.is_dominant(k)) continue;
      CAPTURE(small.network().reactions()[k].id);
      const double a = scaled_intensity(small, k, small.initial_state());
      const double b = scaled_intensity(large, k, large.initial_state());
      CHECK(std::abs(a - b) <= 10.0 / 1000.0 * std::max(1.0, std::abs(b)));
      const auto split = decompose_intensity(large, k, large.gamma());
      const double limit = split.kappa() * split.low(large.initial_state().low) * limit_factor(large, k);
      CHECK(std::abs(b - limit) <= 1e-5 * std::max(1.0, limit));
    }
  }
}

TEST_CASE("decomposition reproduces the scaled intensity") {
  std::mt19937_64 rng(5);
  for (const auto* name : {"futile.net", "yeast.net", "p53.net", "lotka.net", "projection_example.net"}) {
    CAPTURE(name);
    const ScaledSystem sys(bundled(name), 1000);
    const auto& net = sys.network();
    const auto d = net.low_count();
    std::uniform_int_distribution<std::int64_t> low(0, 12);
    std::uniform_int_distribution<std::int64_t> high(0, 5000);
    for (int trial = 0; trial < 2000; ++trial) {
      std::vector<std::int64_t> raw(net.species_count());
      for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = i < d ? low(rng) : high(rng);
      const auto z = sys.scaled_from_raw(raw);
      for (std::size_t k = 0; k < net.reaction_count(); ++k) {
        const auto split = decompose_intensity(sys, k, sys.gamma());
        const double product = split.kappa() * split.low(z.low) * split.high(z.high);
        const double direct = scaled_intensity(sys, k, z);
        CHECK(std::abs(product - direct) <= 1e-13 * std::max(1e-300, std::abs(direct)));
        CHECK(split.high_from_raw(raw) == doctest::Approx(split.high(z.high)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("Lotka r8 splits into sqrt of B and the scaled A") {
  const ScaledSystem sys(bundled("lotka.net"), 1000);
  const auto split = decompose_intensity(sys, "r8");
  const auto& net = sys.network();
  std::vector<std::int64_t> low(net.low_count(), 0);
  low[net.species_index("B")] = 9;
  CHECK(split.kappa() == 2.4);
  CHECK(split.low(low) == doctest::Approx(3.0));
  CHECK(split.high(std::vector<double>{1.7}) == doctest::Approx(1.7));
  CHECK(split.low_factors().size() == 1);
  CHECK(split.low_factors()[0].kind == FactorKind::Sqrt);
}

TEST_CASE("a low-only reaction has a constant high part") {
  const ScaledSystem sys(bundled("futile.net"), 100);
  const auto split = decompose_intensity(sys, "r8");
  CHECK(split.high_factors().empty());
  CHECK(split.high(std::vector<double>{0.5, 0.5, 0.5, 0.5}) == doctest::Approx(0.01));
}

TEST_CASE("mixed log1p factor violates the decomposition condition") {
  const auto net = parse_network(
      "species B alpha=0 z0=1\nspecies C alpha=1 z0=1\nreaction r: B + C -> 2 C kappa=1 beta=0 law=log1p(B*C)\n");
  const ScaledSystem sys(net, 100);
  CHECK_THROWS_AS(decompose_intensity(sys, "r"), ConditionError);
  const auto report = validate_conditions(sys);
  CHECK_FALSE(report.all_pass());
  CHECK_FALSE(report.reactions[0].cd1);
  CHECK_FALSE(report.reactions[0].failures.empty());
}

TEST_CASE("bundled networks satisfy the conditions") {
  for (const auto* name : {"futile.net", "yeast.net", "p53.net", "lotka.net", "projection_example.net"}) {
    CAPTURE(name);
    CHECK(validate_conditions(ScaledSystem(bundled(name), 1000)).all_pass());
  }
}

TEST_CASE("compact set membership") {
  const std::int64_t N = 10000;
  const ScaledSystem sys(bundled("futile.net"), N);
  const auto limits = limit_factors(sys);
  const double M = std::pow(static_cast<double>(N), 0.3);
  const auto z0 = sys.initial_state();
  CHECK(in_compact_set(sys, limits, z0, M));
  CHECK(in_compact_set(sys, limits, z0, 2.0));

  auto far = z0;
  far.low[0] = static_cast<std::int64_t>(std::floor(M)) + 1;
  CHECK_FALSE(in_compact_set(sys, limits, far, M));

  auto shifted = z0;
  const auto s2 = sys.network().species_index("S2") - sys.network().low_count();
  shifted.high[s2] += 2.0 * M / static_cast<double>(N);
  CHECK_FALSE(in_compact_set(sys, limits, shifted, M));

  const CompactSetMonitor monitor(sys, limits, M);
  const auto raw = sys.network().initial_counts(N);
  CHECK(monitor.contains_raw(raw));
  CHECK(monitor.contains(z0));
}
