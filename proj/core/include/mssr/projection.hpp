#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mssr/network.hpp"
#include "mssr/scaling.hpp"

namespace mssr {

struct ComplexSplit {
  Complex low;   // q_L(y)
  Complex high;  // q_H(y)
};

ComplexSplit project_complex(const ReactionNetwork& net, const Complex& y);

/// s_k: limit of the scaled high-copy part at the initial state (0 for negligible reactions).
/// Throws ConditionError when the limit does not exist.
double limit_factor(const ScaledSystem& sys, std::string_view id);
double limit_factor(const ScaledSystem& sys, std::size_t k);
/// s_k for every reaction, by index.
std::vector<double> limit_factors(const ScaledSystem& sys);

struct Provenance {
  std::string id;
  double kappa = 0.0;
  double s = 0.0;
};

struct ReducedReaction {
  std::string id;
  Complex source;
  Complex target;
  double kappa_bar = 0.0;
  std::vector<Factor> low_law;  // factors of lambda_L shared by every contributor
  std::vector<Provenance> provenance;  // sorted by original id
};

class ProjectedSystem {
 public:
  ProjectedSystem(std::vector<Species> species, std::vector<ReducedReaction> reactions,
                  std::vector<std::string> dropped, std::vector<std::string> warnings);

  const std::vector<Species>& species() const { return species_; }
  const std::vector<ReducedReaction>& reactions() const { return reactions_; }
  /// Dominant reactions that project to a self-loop or carry zero weight.
  const std::vector<std::string>& dropped() const { return dropped_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Scale-free network (alpha = beta = 0) with kappa = kappa_bar.
  const ReactionNetwork& network() const { return network_; }
  std::vector<std::int64_t> initial_state() const;

 private:
  std::vector<Species> species_;
  std::vector<ReducedReaction> reactions_;
  std::vector<std::string> dropped_;
  std::vector<std::string> warnings_;
  ReactionNetwork network_;
};

/// Builds (S_L, C_L, R_L, K_L) at gamma = -theta0. Throws ConditionError if a dominant
/// reaction fails CD1 or CD3.
ProjectedSystem build_projected_system(const ScaledSystem& sys);

struct StationarityReport {
  bool irreducible = false;
  bool solved = false;
  bool moments_stable = false;
  std::int64_t box = 0;
  std::size_t states = 0;
  double residual = 0.0;
  double moment_sum = 0.0;          // sum_x sum_u lambda_u(x)^2 pi(x) on the box
  double moment_sum_doubled = 0.0;  // same on the doubled box
  std::vector<std::string> notes;
};

/// Numerical check that the reduced chain has a stationary law with a finite second
/// intensity moment: solves on box M and 2M and compares the moment sums (1%).
StationarityReport stationarity_probe(const ProjectedSystem& proj, std::int64_t box);

}  // namespace mssr
