#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mssr/distribution.hpp"
#include "mssr/projection.hpp"
#include "mssr/scaling.hpp"

namespace mssr {

struct SimulationConfig {
  double T = 1.0;  // reduced-time horizon
  std::size_t samples = 1;
  std::uint64_t base_seed = 0;
  std::vector<std::string> record;  // empty: every species
  std::optional<double> exit_M;     // monitor S_M (original system only)
  std::uint64_t max_jumps = 100'000'000;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct Trajectory {
  std::vector<double> observed;  // recorded species: low as counts, high as counts / N^alpha
  std::uint64_t jumps = 0;
  bool exited = false;           // left S_M before T
  double exit_time = 0.0;
  bool capped = false;           // max_jumps reached; excluded from distributions
};

struct TrajectoryEnsemble {
  std::vector<std::string> species;  // recorded species
  std::vector<bool> low;             // per recorded species
  std::uint64_t base_seed = 0;
  double T = 0.0;
  std::vector<Trajectory> trajectories;  // trajectory i uses stream i of base_seed

  std::size_t capped_count() const;
};

/// Direct-method SSA of X^N in raw counts with intensities N^{beta_k + gamma} lambda_k(x),
/// i.e. Z^{N,gamma} up to reduced time T.
TrajectoryEnsemble simulate_original(const ScaledSystem& sys, const SimulationConfig& cfg);

/// SSA of a scale-free network (e.g. ProjectedSystem::network()) from its z0 values.
TrajectoryEnsemble simulate_reduced(const ReactionNetwork& net, const SimulationConfig& cfg);
TrajectoryEnsemble simulate_reduced(const ProjectedSystem& proj, const SimulationConfig& cfg);

/// Normalized histogram of terminal values of low-copy species (capped trajectories excluded).
DistributionVector empirical_distribution(const TrajectoryEnsemble& ens, const std::vector<std::string>& subset);

struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
};

/// Monte Carlo estimate of E(J^m) over non-capped trajectories.
Estimate jump_moment_estimate(const TrajectoryEnsemble& ens, int m);

struct ProportionEstimate {
  double p = 0.0;
  double lower = 0.0;  // 95% Wilson interval
  double upper = 0.0;
  std::size_t successes = 0;
  std::size_t trials = 0;
  double standard_error = 0.0;
};

ProportionEstimate wilson_interval(std::size_t successes, std::size_t trials);

/// Fraction of original-system trajectories leaving S_M before T (cfg.exit_M required).
ProportionEstimate exit_probability_estimate(const ScaledSystem& sys, const SimulationConfig& cfg);

}  // namespace mssr
