#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mssr {

using State = std::vector<std::int64_t>;

/// Probability mass function over integer states of a named species tuple.
/// `leaked` records mass known to lie outside the support (truncation loss).
class DistributionVector {
 public:
  DistributionVector() = default;
  explicit DistributionVector(std::vector<std::string> species) : species_(std::move(species)) {}

  const std::vector<std::string>& species() const { return species_; }
  const std::map<State, double>& masses() const { return masses_; }

  void add(const State& state, double mass);
  double mass(const State& state) const;
  double total() const;
  std::size_t size() const { return masses_.size(); }

  double leaked() const { return leaked_; }
  void set_leaked(double leaked) { leaked_ = leaked; }

  /// Divides by total(); leaves an all-zero vector untouched.
  void normalize();
  /// Marginal on a subset of species (by name, in the given order).
  DistributionVector marginal(const std::vector<std::string>& subset) const;
  double mean(const std::string& species) const;

 private:
  std::vector<std::string> species_;
  std::map<State, double> masses_;
  double leaked_ = 0.0;
};

}  // namespace mssr
