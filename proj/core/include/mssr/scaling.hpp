#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mssr/network.hpp"
#include "mssr/rational.hpp"

namespace mssr {

/// Point of the scaled state space: integer low-copy counts and scaled high-copy
/// values z_h = x_h / N^alpha, both ordered like the network's species blocks.
struct ScaledState {
  std::vector<std::int64_t> low;
  std::vector<double> high;

  friend bool operator==(const ScaledState&, const ScaledState&) = default;
};

/// A network bound to a scaling parameter N and a timescale exponent gamma.
/// Orders and theta0 are exact rationals; a reaction whose initial intensity
/// vanishes identically (degenerate high-side factor) has no order.
class ScaledSystem {
 public:
  /// gamma defaults to -theta0.
  ScaledSystem(ReactionNetwork network, std::int64_t N, std::optional<Rational> gamma = std::nullopt);

  const ReactionNetwork& network() const { return network_; }
  std::int64_t N() const { return N_; }
  const Rational& gamma() const { return gamma_; }
  const Rational& theta0() const { return theta0_; }

  const std::optional<Rational>& order(std::size_t k) const { return orders_[k]; }
  bool is_dominant(std::size_t k) const { return dominant_[k]; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// N^alpha_i.
  double species_scale(std::size_t i) const { return scales_[i]; }
  ScaledState initial_state() const;
  /// Raw (unscaled) values x_i = N^alpha_i z_i for every species.
  std::vector<double> raw_values(const ScaledState& z) const;
  ScaledState scaled_from_raw(std::span<const std::int64_t> counts) const;

 private:
  ReactionNetwork network_;
  std::int64_t N_;
  Rational gamma_;
  Rational theta0_{0};
  std::vector<std::optional<Rational>> orders_;
  std::vector<bool> dominant_;
  std::vector<double> scales_;
  std::vector<std::string> warnings_;
};

/// N-order of reaction k's initial intensity N^beta lambda_k(X^N(0)).
/// std::nullopt means the intensity is identically zero at the initial state.
std::optional<Rational> intensity_order(const ScaledSystem& sys, std::string_view id);

struct Classification {
  std::vector<std::string> dominant;    // orders equal to theta0
  std::vector<std::string> negligible;  // everything else
};

Classification classify_reactions(const ScaledSystem& sys);

/// lambda^{N,gamma}_k(z) = N^{gamma + beta_k} lambda_k(N^alpha z).
double scaled_intensity(const ScaledSystem& sys, std::string_view id, const ScaledState& z);
double scaled_intensity(const ScaledSystem& sys, std::size_t k, const ScaledState& z);

/// kappa_k lambda_{L,k}(z_l) lambda^{N,gamma}_{H,k}(z_h) split of one reaction.
class IntensitySplit {
 public:
  double kappa() const { return kappa_; }
  /// Low-copy part (without kappa) at low counts.
  double low(std::span<const std::int64_t> low_counts) const;
  /// High-copy part including N^{gamma+beta} at scaled high values.
  double high(std::span<const double> high_values) const;
  /// High-copy part evaluated from raw counts of every species.
  double high_from_raw(std::span<const std::int64_t> raw_counts) const;

  const std::vector<Factor>& low_factors() const { return low_factors_; }
  const std::vector<Factor>& high_factors() const { return high_factors_; }

 private:
  friend IntensitySplit decompose_intensity(const ScaledSystem&, std::size_t, const Rational&);

  struct Bound {
    Factor factor;
    std::vector<std::size_t> index;  // species indices into the full species list
  };

  double kappa_ = 0.0;
  double prefactor_ = 1.0;  // N^{gamma+beta}
  std::size_t low_count_ = 0;
  std::vector<double> scales_;
  std::vector<Factor> low_factors_;
  std::vector<Factor> high_factors_;
  std::vector<Bound> low_bound_;
  std::vector<Bound> high_bound_;
};

/// Throws ConditionError when a factor couples low- and high-copy species.
IntensitySplit decompose_intensity(const ScaledSystem& sys, std::string_view id);
/// Same split with an explicit timescale exponent.
IntensitySplit decompose_intensity(const ScaledSystem& sys, std::size_t k, const Rational& gamma);

struct ReactionConditions {
  std::string id;
  bool cd1 = true;  // decomposable into low x high parts
  bool cd2 = true;  // low part polynomially bounded
  bool cd3 = true;  // high part has a limit as N grows
  std::vector<std::string> failures;
  std::vector<std::string> notes;
};

struct ConditionReport {
  std::vector<ReactionConditions> reactions;
  bool all_pass() const;
};

ConditionReport validate_conditions(const ScaledSystem& sys);

/// Membership in S_M: ||z_l||_inf <= M and |lambda^{N,-theta0}_{H,k}(z_h) - s_k| <= M/N
/// for every dominant reaction. `limits` holds s_k for every reaction (by index).
bool in_compact_set(const ScaledSystem& sys, std::span<const double> limits, const ScaledState& z, double M);

/// Reusable S_M membership test; the simulator queries it after every jump.
class CompactSetMonitor {
 public:
  CompactSetMonitor(const ScaledSystem& sys, std::vector<double> limits, double M);

  bool contains(const ScaledState& z) const;
  bool contains_raw(std::span<const std::int64_t> raw_counts) const;
  double M() const { return M_; }

 private:
  std::size_t low_count_;
  double M_;
  double tolerance_;  // M / N
  std::vector<std::size_t> dominant_;
  std::vector<IntensitySplit> splits_;
  std::vector<double> limits_;
};

}  // namespace mssr
