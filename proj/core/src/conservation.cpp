#include <numeric>

#include "mssr/network.hpp"

namespace mssr {

std::vector<std::vector<std::int64_t>> conservation_laws(const ReactionNetwork& net) {
  const auto d = net.species_count();
  const auto r = net.reaction_count();

  // Rows are reactions, columns species: w is conserved iff A w = 0.
  std::vector<std::vector<Rational>> a(r, std::vector<Rational>(d));
  for (std::size_t k = 0; k < r; ++k) {
    const auto& change = net.stoichiometry(k);
    for (std::size_t i = 0; i < d; ++i) a[k][i] = Rational(change[i]);
  }

  std::vector<std::size_t> pivot_columns;
  std::size_t row = 0;
  for (std::size_t col = 0; col < d && row < r; ++col) {
    std::size_t pivot = row;
    while (pivot < r && a[pivot][col].numerator() == 0) ++pivot;
    if (pivot == r) continue;
    std::swap(a[pivot], a[row]);
    const Rational lead = a[row][col];
    for (auto& v : a[row]) v /= lead;
    for (std::size_t other = 0; other < r; ++other) {
      if (other == row || a[other][col].numerator() == 0) continue;
      const Rational factor = a[other][col];
      for (std::size_t j = 0; j < d; ++j) a[other][j] -= factor * a[row][j];
    }
    pivot_columns.push_back(col);
    ++row;
  }

  std::vector<bool> is_pivot(d, false);
  for (auto c : pivot_columns) is_pivot[c] = true;

  std::vector<std::vector<std::int64_t>> basis;
  for (std::size_t free = 0; free < d; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> w(d, Rational(0));
    w[free] = 1;
    for (std::size_t p = 0; p < pivot_columns.size(); ++p) w[pivot_columns[p]] = -a[p][free];

    std::int64_t lcm = 1;
    for (const auto& v : w) lcm = std::lcm(lcm, v.denominator());
    std::vector<std::int64_t> integer(d);
    std::int64_t gcd = 0;
    for (std::size_t i = 0; i < d; ++i) {
      integer[i] = w[i].numerator() * (lcm / w[i].denominator());
      gcd = std::gcd(gcd, integer[i] < 0 ? -integer[i] : integer[i]);
    }
    std::int64_t sign = 1;
    for (auto v : integer) {
      if (v != 0) {
        sign = v < 0 ? -1 : 1;
        break;
      }
    }
    if (gcd == 0) gcd = 1;
    for (auto& v : integer) v = sign * v / gcd;
    basis.push_back(std::move(integer));
  }
  return basis;
}

}  // namespace mssr
