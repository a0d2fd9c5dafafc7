#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "mssr/distribution.hpp"
#include "mssr/network.hpp"

namespace mssr {

enum class TruncationKind { Box, Slice };

struct TruncationOptions {
  /// Box bound M; defaults to max(40, 4 * max initial count).
  std::optional<std::int64_t> box;
  /// Use the exact conservation slice whenever every species is bounded by a conservation law.
  bool prefer_slice = true;
  std::size_t state_cap = 10'000'000;
};

struct StateHash {
  std::size_t operator()(const State& s) const noexcept;
};

/// States reachable from the initial state inside the truncation, in BFS order
/// (the initial state has index 0).
class StateEnumeration {
 public:
  StateEnumeration(std::vector<std::string> species, std::vector<State> states, TruncationKind kind,
                   std::int64_t box);

  const std::vector<std::string>& species() const { return species_; }
  const std::vector<State>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  const State& state(std::size_t i) const { return states_[i]; }
  std::optional<std::size_t> find(const State& s) const;

  TruncationKind kind() const { return kind_; }
  /// Box bound (0 for a slice).
  std::int64_t box() const { return box_; }
  /// "box M=40" or "slice".
  std::string describe() const;

 private:
  std::vector<std::string> species_;
  std::vector<State> states_;
  std::unordered_map<State, std::size_t, StateHash> index_;
  TruncationKind kind_;
  std::int64_t box_;
};

/// Throws ValidationError for a network that is not scale-free, TruncationError above the state cap.
StateEnumeration enumerate_states(const ReactionNetwork& net, const State& initial,
                                  const TruncationOptions& options = {});

/// Truncated generator with dp/dt = Q p: column j holds the rates out of state j.
/// Transitions leaving the enumeration are collected in outflow(j).
class GeneratorMatrix {
 public:
  GeneratorMatrix(StateEnumeration states, Eigen::SparseMatrix<double> q, Eigen::VectorXd outflow);

  const StateEnumeration& states() const { return states_; }
  const Eigen::SparseMatrix<double>& matrix() const { return q_; }
  const Eigen::VectorXd& outflow() const { return outflow_; }
  /// max_j |Q_jj|.
  double max_exit_rate() const { return max_exit_; }
  /// Q with outflow returned to the diagonal (reflecting truncation).
  Eigen::SparseMatrix<double> reflecting() const;

 private:
  StateEnumeration states_;
  Eigen::SparseMatrix<double> q_;
  Eigen::VectorXd outflow_;
  double max_exit_ = 0.0;
};

GeneratorMatrix build_generator(const ReactionNetwork& net, StateEnumeration states);

struct TransientOptions {
  double error_budget = 1e-10;
  /// TruncationError when more than this much mass leaves the truncation.
  double leak_tolerance = 1e-6;
};

struct TransientResult {
  DistributionVector p;
  double leaked = 0.0;
  std::size_t steps = 0;
  std::size_t terms = 0;
};

/// p(t) = exp(Q t) p0 by uniformization.
TransientResult transient_solve(const GeneratorMatrix& gen, const DistributionVector& p0, double t,
                                const TransientOptions& options = {});

struct StationaryResult {
  DistributionVector pi;
  double residual = 0.0;  // ||Q_reflecting pi||_inf
  double boundary_flux = 0.0;  // sum_j outflow_j pi_j
  std::string method;  // "sparse-lu" or "power-iteration"
};

/// Solves Q pi = 0, sum pi = 1 on the reflecting truncation.
StationaryResult stationary_solve(const GeneratorMatrix& gen);

/// Transient law of immigration-death with birth rate b and per-molecule death rate d:
/// Poisson(b/d (1 - e^{-dt})) convolved with Binomial(n0, e^{-dt}). Tail below 1e-16 is cut.
DistributionVector birth_death_reference(double birth, double death, std::int64_t n0, double t,
                                         const std::string& species = "X");

DistributionVector point_mass(std::vector<std::string> species, const State& state);

}  // namespace mssr
