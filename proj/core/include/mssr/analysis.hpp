#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mssr/distribution.hpp"
#include "mssr/event.hpp"
#include "mssr/network.hpp"
#include "mssr/ssa.hpp"

namespace mssr {

double event_probability(const DistributionVector& dist, const EventSet& event);
/// Empirical probability with a 95% Wilson interval (capped trajectories excluded).
ProportionEstimate event_probability(const TrajectoryEnsemble& ens, const EventSet& event);

/// 1/2 sum |p - q| over the union of supports; both must label the same species.
double total_variation(const DistributionVector& p, const DistributionVector& q);

struct PowerLawFit {
  double slope = 0.0;  // of log y against log x
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double ci_lower = 0.0;  // 95% Student-t interval for the slope
  double ci_upper = 0.0;
  std::size_t points = 0;

  friend bool operator==(const PowerLawFit&, const PowerLawFit&) = default;
};

/// Least squares on (log x, log y); needs at least two points with x, y > 0.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

struct ConvergencePoint {
  std::int64_t N = 0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;  // usable trajectories
  std::size_t capped = 0;
  double probability = 0.0;  // original system
  double d = 0.0;
  double standard_error = 0.0;
  bool used_in_fit = false;

  friend bool operator==(const ConvergencePoint&, const ConvergencePoint&) = default;
};

struct ConvergenceReport {
  std::string network;
  std::string event;
  double t = 0.0;
  std::size_t samples = 0;
  std::uint64_t base_seed = 0;
  std::string reference_method;  // "cme (slice)", "cme (box M=40)" or "reduced-ssa"
  double reference_probability = 0.0;
  double reference_stderr = 0.0;
  std::vector<ConvergencePoint> points;
  std::optional<PowerLawFit> fit;
  double nu = 0.0;  // -slope when fit is present
  bool reliable = false;
  std::vector<std::string> notes;

  friend bool operator==(const ConvergenceReport&, const ConvergenceReport&) = default;
};

struct SweepOptions {
  EventSet event;
  double t = 1.0;
  std::vector<std::int64_t> grid;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string label;
  /// Run the projected system in place of the original at every N (null check).
  bool substitute_reduced = false;
};

/// Seed used for grid point j.
std::uint64_t sweep_seed(std::uint64_t base, std::size_t j);

ConvergenceReport convergence_sweep(const ReactionNetwork& net, const SweepOptions& options);

}  // namespace mssr
