#include <doctest.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mssr/error.hpp"
#include "mssr/network.hpp"
#include "support.hpp"

using namespace mssr;
using mssr::testing::bundled;

namespace {

const char* kProjectionExample = R"(
species A alpha=0 z0=2
species B alpha=0 z0=2
species C alpha=1 z0=3
reaction r1: A + B -> 2 B kappa=1 beta=-1
reaction r2: 2 B -> A + B kappa=2 beta=0
reaction r3: A + C -> 2 C kappa=3 beta=0
reaction r4: 3 C -> A kappa=4 beta=-2
reaction r5: A -> 3 C kappa=5 beta=1
reaction r6: B -> 0 kappa=6 beta=1
)";

std::size_t parse_error_column(const std::string& text) {
  try {
    parse_network(text);
  } catch (const ParseError& e) {
    return e.column();
  }
  return 0;
}

}  // namespace

TEST_CASE("projection example parses to 3 species and 6 reactions") {
  const auto net = parse_network(kProjectionExample);
  CHECK(net.species_count() == 3);
  CHECK(net.reaction_count() == 6);
  CHECK(net.low_count() == 2);
  CHECK(net.reactions()[1].source == Complex({{"B", 2}}));
  CHECK(net.reactions()[3].law.beta == Rational(-2));
  CHECK_FALSE(net.reactions()[0].law.explicit_law);
}

TEST_CASE("a species without reactions is a valid network") {
  const auto net = parse_network("species A alpha=0 z0=1\n");
  CHECK(net.reaction_count() == 0);
  CHECK(conservation_laws(net).size() == 1);
}

TEST_CASE("species are ordered low before high, then by name") {
  const auto net = parse_network(
      "species Z alpha=1 z0=1\nspecies b alpha=0 z0=1\nspecies Y alpha=1/2 z0=1\nspecies a alpha=0 z0=1\n");
  std::vector<std::string> names;
  for (const auto& s : net.species()) names.push_back(s.name);
  CHECK(names == std::vector<std::string>{"a", "b", "Y", "Z"});
  CHECK(net.species()[2].alpha == Rational(1, 2));
}

TEST_CASE("malformed files are rejected") {
  CHECK_THROWS_AS(parse_network("species A alpha=0 z0=1\nreaction r1: 2 A -> 2 A kappa=1 beta=0\n"), ParseError);
  CHECK_THROWS_AS(parse_network("species A alpha=0 z0=1\nspecies A alpha=0 z0=2\n"), ParseError);
  CHECK_THROWS_AS(parse_network("species A alpha=0 z0=1\nreaction r1: A -> 0 kappa=-1 beta=0\n"), ParseError);
  CHECK_THROWS_AS(parse_network("species A alpha=-1 z0=1\n"), ParseError);
  CHECK_THROWS_AS(parse_network("species A alpha=0 z0=1.5\n"), ParseError);
  CHECK_THROWS_AS(parse_network("species A alpha=0 z0=1\nreaction r1: A -> 0 beta=0\n"), ParseError);
  CHECK_THROWS_AS(parse_network("species A alpha=0 z0=1\nreaction r1: A -> 0 kappa=1 law=hill(B,1)\n"), ParseError);
}

TEST_CASE("parse errors carry line and column") {
  try {
    parse_network("species A alpha=0 z0=1\nreaction r1: A -> B kappa=1 beta=0\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 19);
  }
  CHECK(parse_error_column("species A alpha=0 z0=x\n") == 22);
}

TEST_CASE("declaration order of species does not matter") {
  const auto net = parse_network("reaction r1: A -> 0 kappa=1 beta=0\nspecies A alpha=0 z0=1\n");
  CHECK(net.reaction_count() == 1);
}

TEST_CASE("serialize then parse is the identity on bundled networks") {
  for (const auto* name : {"futile.net", "yeast.net", "p53.net", "lotka.net", "projection_example.net"}) {
    CAPTURE(name);
    const auto net = bundled(name);
    const auto text = serialize_network(net);
    CHECK(parse_network(text) == net);
    CHECK(serialize_network(parse_network(text)) == text);
  }
}

TEST_CASE("serialize then parse is the identity on random networks") {
  std::mt19937_64 rng(11);
  const std::vector<std::string> names{"A", "B", "C", "D"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    for (std::size_t i = 0; i < names.size(); ++i) {
      text += "species " + names[i] + " alpha=" + std::to_string(rng() % 2) + "/" + std::to_string(1 + rng() % 3) +
              " z0=" + std::to_string(rng() % 5) + "\n";
    }
    auto random_complex = [&] {
      std::string c;
      for (const auto& n : names) {
        if (rng() % 3 == 0) c += (c.empty() ? "" : " + ") + std::to_string(1 + rng() % 2) + " " + n;
      }
      return c.empty() ? std::string("0") : c;
    };
    int reactions = 0;
    for (int k = 0; k < 5; ++k) {
      const auto source = random_complex();
      const auto target = random_complex();
      if (source == target) continue;
      text += "reaction r" + std::to_string(++reactions) + ": " + source + " -> " + target +
              " kappa=" + std::to_string(rng() % 100) + ".25 beta=" + std::to_string(static_cast<int>(rng() % 5) - 2);
      if (rng() % 2 == 0) {
        const auto h = rng() % 4;
        text += " law=hill(" + names[h] + ",1.5);sqrt(" + names[(h + 1 + rng() % 3) % 4] + ")";
      }
      text += "\n";
    }
    const auto net = parse_network(text);
    CHECK(parse_network(serialize_network(net)) == net);
  }
}

TEST_CASE("intensity examples") {
  const auto futile = bundled("futile.net");
  std::vector<std::int64_t> x(futile.species_count(), 0);
  x[futile.species_index("S1")] = 2;
  x[futile.species_index("S2")] = 200;
  CHECK(evaluate_intensity(futile, "r1", x) == doctest::Approx(400.0));

  const auto dimer = parse_network("species A alpha=0 z0=1\nreaction r1: 2 A -> 0 kappa=3 beta=0\n");
  CHECK(evaluate_intensity(dimer, "r1", std::vector<std::int64_t>{1}) == 0.0);
  CHECK(evaluate_intensity(dimer, "r1", std::vector<std::int64_t>{4}) == doctest::Approx(36.0));

  const auto p53 = bundled("p53.net");
  std::vector<std::int64_t> y(p53.species_count(), 0);
  y[p53.species_index("P0")] = 5;
  y[p53.species_index("S")] = 10;
  CHECK(evaluate_intensity(p53, "r1", y) == doctest::Approx(1.1 * 5.0 * 10.0 / 14.7).epsilon(1e-14));

  CHECK_THROWS_AS(evaluate_intensity(p53, "nope", y), std::out_of_range);
}

TEST_CASE("mass action equals the exact factorial quotient") {
  const auto net = parse_network(
      "species A alpha=0 z0=1\nspecies B alpha=0 z0=1\nreaction r1: 3 A + 2 B -> 0 kappa=1.5 beta=0\n");
  auto falling = [](std::int64_t x, int d) {
    std::int64_t v = 1;
    for (int j = 0; j < d; ++j) v *= (x - j) > 0 ? (x - j) : 0;
    return v;
  };
  for (std::int64_t a = 0; a <= 20; ++a) {
    for (std::int64_t b = 0; b <= 20; ++b) {
      const double expected = 1.5 * static_cast<double>(falling(a, 3) * falling(b, 2));
      CHECK(evaluate_intensity(net, "r1", std::vector<std::int64_t>{a, b}) == expected);
    }
  }
}

TEST_CASE("every catalog factor is nondecreasing in each count") {
  const auto net = parse_network(R"(
species A alpha=0 z0=1
species B alpha=0 z0=1
reaction f: 2 A -> 0 kappa=1 beta=0 law=ff(A,2)
reaction p: A -> 0 kappa=1 beta=0 law=pow(A,3)
reaction h: A -> 0 kappa=2 beta=0 law=hill(A,0.7)
reaction s: A -> 0 kappa=1 beta=0 law=sqrt(A)
reaction l: A + B -> 0 kappa=1 beta=0 law=log1p(A*B)
reaction m: A + B -> 0 kappa=1 beta=0 law=ff(A);hill(B,3)
)");
  for (const auto& r : net.reactions()) {
    for (std::size_t coord = 0; coord < 2; ++coord) {
      for (std::int64_t other = 0; other <= 6; ++other) {
        double previous = -1.0;
        for (std::int64_t v = 0; v <= 30; ++v) {
          std::vector<std::int64_t> x{other, other};
          x[coord] = v;
          const double value = evaluate_intensity(net, r.id, x);
          CHECK(value >= 0.0);
          CHECK(value >= previous);
          previous = value;
        }
      }
    }
  }
}

TEST_CASE("conservation laws") {
  const auto reduced_yeast = parse_network(
      "species G alpha=0 z0=5\nspecies Gbg alpha=0 z0=5\n"
      "reaction a: G -> Gbg kappa=0.011 beta=0\nreaction b: Gbg -> G kappa=1 beta=0\n");
  CHECK(conservation_laws(reduced_yeast) == std::vector<std::vector<std::int64_t>>{{1, 1}});

  const auto birth_death = parse_network("species S alpha=0 z0=0\nreaction a: S -> 0 kappa=1 beta=0\nreaction b: 0 -> S kappa=1 beta=0\n");
  CHECK(conservation_laws(birth_death).empty());

  const auto ab = parse_network(
      "species A alpha=0 z0=1\nspecies B alpha=0 z0=1\n"
      "reaction a: A + B -> 2 B kappa=1 beta=0\nreaction b: B -> A kappa=1 beta=0\n");
  CHECK(conservation_laws(ab) == std::vector<std::vector<std::int64_t>>{{1, 1}});

  for (const auto* name : {"futile.net", "yeast.net", "p53.net", "lotka.net", "projection_example.net"}) {
    const auto net = bundled(name);
    for (const auto& w : conservation_laws(net)) {
      for (std::size_t k = 0; k < net.reaction_count(); ++k) {
        std::int64_t dot = 0;
        for (std::size_t i = 0; i < w.size(); ++i) dot += w[i] * net.stoichiometry(k)[i];
        CHECK(dot == 0);
      }
    }
  }
}

TEST_CASE("futile cycle keeps S2 + S3 + S5 - S4 fixed") {
  // species order S1, S4, S2, S3, S5, S6; hand elimination over r1..r10
  const auto net = bundled("futile.net");
  CHECK(conservation_laws(net) == std::vector<std::vector<std::int64_t>>{{0, 1, -1, -1, -1, 0}});
}
