#include "mssr/distribution.hpp"

#include <algorithm>
#include <stdexcept>

namespace mssr {

void DistributionVector::add(const State& state, double mass) {
  if (state.size() != species_.size()) throw std::invalid_argument("state dimension does not match distribution");
  masses_[state] += mass;
}

double DistributionVector::mass(const State& state) const {
  auto it = masses_.find(state);
  return it == masses_.end() ? 0.0 : it->second;
}

double DistributionVector::total() const {
  double sum = 0.0;
  for (const auto& [_, m] : masses_) sum += m;
  return sum;
}

void DistributionVector::normalize() {
  const double sum = total();
  if (sum <= 0.0) return;
  for (auto& [_, m] : masses_) m /= sum;
}

DistributionVector DistributionVector::marginal(const std::vector<std::string>& subset) const {
  std::vector<std::size_t> positions;
  for (const auto& name : subset) {
    auto it = std::find(species_.begin(), species_.end(), name);
    if (it == species_.end()) throw std::out_of_range("species '" + name + "' not in distribution");
    positions.push_back(static_cast<std::size_t>(it - species_.begin()));
  }
  DistributionVector out(subset);
  State projected(positions.size());
  for (const auto& [state, m] : masses_) {
    for (std::size_t i = 0; i < positions.size(); ++i) projected[i] = state[positions[i]];
    out.add(projected, m);
  }
  out.leaked_ = leaked_;
  return out;
}

double DistributionVector::mean(const std::string& species) const {
  auto it = std::find(species_.begin(), species_.end(), species);
  if (it == species_.end()) throw std::out_of_range("species '" + species + "' not in distribution");
  const auto pos = static_cast<std::size_t>(it - species_.begin());
  double sum = 0.0;
  for (const auto& [state, m] : masses_) sum += static_cast<double>(state[pos]) * m;
  return sum;
}

}  // namespace mssr
