#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "mssr/error.hpp"
#include "mssr/projection.hpp"
#include "mssr/scaling.hpp"
#include "support.hpp"

using namespace mssr;
using mssr::testing::bundled;

namespace {

const ReducedReaction& find(const ProjectedSystem& proj, const std::string& source, const std::string& target) {
  for (const auto& r : proj.reactions()) {
    if (r.source.to_string() == source && r.target.to_string() == target) return r;
  }
  FAIL("no reduced reaction " << source << " -> " << target);
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("complex projection splits by copy-number class") {
  const auto net = bundled("projection_example.net");
  auto split = project_complex(net, Complex({{"A", 1}, {"C", 1}}));
  CHECK(split.low == Complex({{"A", 1}}));
  CHECK(split.high == Complex({{"C", 1}}));

  split = project_complex(net, Complex());
  CHECK(split.low.empty());
  CHECK(split.high.empty());

  split = project_complex(net, Complex({{"C", 3}, {"A", 2}}));
  CHECK(split.low == Complex({{"A", 2}}));
  CHECK(split.high == Complex({{"C", 3}}));

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    Complex y;
    for (const auto* s : {"A", "B", "C"}) {
      if (const int c = static_cast<int>(rng() % 4); c > 0) y.add(s, c);
    }
    const auto parts = project_complex(net, y);
    CHECK(parts.low + parts.high == y);
  }
}

TEST_CASE("worked projection example") {
  const ScaledSystem sys(bundled("projection_example.net"), 1000);
  CHECK(sys.theta0() == Rational(1));
  CHECK(limit_factor(sys, "r3") == 3.0);
  CHECK(limit_factor(sys, "r4") == 27.0);
  CHECK(limit_factor(sys, "r5") == 1.0);
  CHECK(limit_factor(sys, "r6") == 1.0);
  CHECK(limit_factor(sys, "r1") == 0.0);
  CHECK(limit_factor(sys, "r2") == 0.0);

  const auto proj = build_projected_system(sys);
  REQUIRE(proj.reactions().size() == 3);
  const auto& death = find(proj, "A", "0");
  CHECK(death.kappa_bar == 3.0 * 3.0 + 5.0);
  REQUIRE(death.provenance.size() == 2);
  CHECK(death.provenance[0].id == "r3");
  CHECK(death.provenance[0].s == 3.0);
  CHECK(death.provenance[1].id == "r5");
  CHECK(find(proj, "0", "A").kappa_bar == 27.0 * 4.0);
  CHECK(find(proj, "B", "0").kappa_bar == 6.0);
  CHECK(proj.network().is_scale_free());
  CHECK(proj.initial_state() == std::vector<std::int64_t>{2, 2});
}

TEST_CASE("futile cycle reduces to two birth-death processes") {
  const ScaledSystem sys(bundled("futile.net"), 10000);
  const auto proj = build_projected_system(sys);
  CHECK(proj.species().size() == 2);
  CHECK(find(proj, "S1", "0").kappa_bar == doctest::Approx(1.0));
  CHECK(find(proj, "0", "S1").kappa_bar == doctest::Approx(2.0 * (1.0 + 0.1)));
  CHECK(find(proj, "S4", "0").kappa_bar == doctest::Approx(1.0));
  CHECK(find(proj, "0", "S4").kappa_bar == doctest::Approx(1.0 + 0.1));
  CHECK(proj.reactions().size() == 4);
  // r9 and r10 only touch the complex S6
  CHECK(proj.dropped() == std::vector<std::string>{"r9", "r10"});
}

TEST_CASE("p53 reduces to a precursor chain") {
  const ScaledSystem sys(bundled("p53.net"), 1000);
  CHECK(limit_factor(sys, "r1") == 1.0);
  CHECK(limit_factor(sys, "r13") == 0.0);
  const auto proj = build_projected_system(sys);
  CHECK(find(proj, "0", "P0").kappa_bar == doctest::Approx(1.1));
  CHECK(find(proj, "P0", "P").kappa_bar == doctest::Approx(1.1));
  CHECK(find(proj, "P0", "0").kappa_bar == doctest::Approx(0.6));
  CHECK(find(proj, "P", "0").kappa_bar == doctest::Approx(0.3));
  CHECK(proj.reactions().size() == 4);
}

TEST_CASE("hill limit at zero is zero") {
  const auto net = parse_network(
      "species L alpha=0 z0=1\nspecies H alpha=1 z0=0\n"
      "reaction a: L -> 0 kappa=1 beta=0 law=ff(L);hill(H,2)\nreaction b: 0 -> L kappa=1 beta=0\n");
  const ScaledSystem sys(net, 100);
  CHECK(limit_factor(sys, "a") == 0.0);
  const auto proj = build_projected_system(sys);
  CHECK(std::find(proj.dropped().begin(), proj.dropped().end(), "a") != proj.dropped().end());
}

TEST_CASE("without high-copy species the projection is the identity") {
  const auto net = parse_network(R"(
species A alpha=0 z0=3
species B alpha=0 z0=0
reaction a: A -> B kappa=2 beta=0
reaction b: B -> A kappa=0.5 beta=0
reaction c: 2 A -> 0 kappa=0.25 beta=0
)");
  const ScaledSystem sys(net, 100);
  const auto proj = build_projected_system(sys);
  CHECK(proj.network() == net);
  for (std::size_t k = 0; k < net.reaction_count(); ++k) CHECK(limit_factor(sys, k) == 1.0);
}

TEST_CASE("reaction order does not change the projected system") {
  const auto net = bundled("futile.net");
  auto reactions = net.reactions();
  std::mt19937_64 rng(8);
  const auto reference = build_projected_system(ScaledSystem(net, 1000));
  auto key = [](const ProjectedSystem& p) {
    std::map<std::string, double> m;
    for (const auto& r : p.reactions()) m[r.id + ":" + r.source.to_string() + ">" + r.target.to_string()] = r.kappa_bar;
    return m;
  };
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(reactions.begin(), reactions.end(), rng);
    const ReactionNetwork shuffled(net.species(), reactions);
    const auto proj = build_projected_system(ScaledSystem(shuffled, 1000));
    CHECK(key(proj) == key(reference));
  }
}

TEST_CASE("merged constants add up their provenance") {
  for (const auto* name : {"futile.net", "yeast.net", "p53.net", "lotka.net", "projection_example.net"}) {
    const auto proj = build_projected_system(ScaledSystem(bundled(name), 1000));
    for (const auto& r : proj.reactions()) {
      double sum = 0.0;
      for (const auto& p : r.provenance) sum += p.kappa * p.s;
      CHECK(r.kappa_bar == doctest::Approx(sum).epsilon(1e-15));
      CHECK(r.kappa_bar > 0.0);
      CHECK_FALSE(r.source == r.target);
      CHECK(std::is_sorted(r.provenance.begin(), r.provenance.end(),
                           [](const Provenance& a, const Provenance& b) { return a.id < b.id; }));
    }
  }
}

TEST_CASE("different low laws with the same complexes stay separate") {
  const auto net = parse_network(R"(
species A alpha=0 z0=2
species H alpha=1 z0=1
reaction a: A + H -> H kappa=1 beta=0
reaction b: A + H -> H kappa=2 beta=0 law=hill(A,3);ff(H)
)");
  const auto proj = build_projected_system(ScaledSystem(net, 100));
  CHECK(proj.reactions().size() == 2);
  CHECK_FALSE(proj.warnings().empty());
}

TEST_CASE("projected intensities are scale free") {
  const auto a = build_projected_system(ScaledSystem(bundled("yeast.net"), 1000));
  const auto b = build_projected_system(ScaledSystem(bundled("yeast.net"), 100000));
  REQUIRE(a.reactions().size() == b.reactions().size());
  for (std::size_t u = 0; u < a.reactions().size(); ++u) {
    CHECK(a.reactions()[u].kappa_bar == b.reactions()[u].kappa_bar);
  }
}

TEST_CASE("stationarity probe") {
  const auto futile = build_projected_system(ScaledSystem(bundled("futile.net"), 1000));
  const auto f = stationarity_probe(futile, 30);
  CHECK(f.irreducible);
  CHECK(f.solved);
  CHECK(f.moments_stable);

  const auto yeast = build_projected_system(ScaledSystem(bundled("yeast.net"), 1000));
  const auto y = stationarity_probe(yeast, 30);
  CHECK(y.states == 11);
  CHECK(y.solved);
  CHECK(y.moments_stable);

  const auto lotka = build_projected_system(ScaledSystem(bundled("lotka.net"), 1000));
  const auto l = stationarity_probe(lotka, 60);
  CHECK(l.irreducible);
  CHECK(l.solved);
  CHECK(l.moments_stable);
}
