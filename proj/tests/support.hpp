#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mssr/distribution.hpp"
#include "mssr/network.hpp"

namespace mssr::testing {

inline std::string network_path(const std::string& name) { return std::string(MSSR_NETWORK_DIR) + "/" + name; }

inline ReactionNetwork bundled(const std::string& name) { return load_network(network_path(name)); }

// pmf by the recurrence p(k) = p(k-1) mu / k, independent of the library
inline std::vector<double> poisson_pmf(double mu, std::size_t n) {
  std::vector<double> p(n);
  p[0] = std::exp(-mu);
  for (std::size_t k = 1; k < n; ++k) p[k] = p[k - 1] * mu / static_cast<double>(k);
  return p;
}

inline std::vector<double> binomial_pmf(int n, double q) {
  std::vector<double> p(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    double c = 1.0;
    for (int j = 1; j <= k; ++j) c = c * (n - k + j) / j;
    p[static_cast<std::size_t>(k)] = c * std::pow(q, k) * std::pow(1.0 - q, n - k);
  }
  return p;
}

inline DistributionVector from_pmf(const std::string& species, const std::vector<double>& pmf) {
  DistributionVector d({species});
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    if (pmf[k] > 0.0) d.add({static_cast<std::int64_t>(k)}, pmf[k]);
  }
  return d;
}

}  // namespace mssr::testing
