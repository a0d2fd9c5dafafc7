#include "mssr/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mssr/error.hpp"

namespace mssr {

namespace {

enum class Side { Low, High, Mixed };

Side factor_side(const ReactionNetwork& net, const Factor& f) {
  bool low = false, high = false;
  for (const auto& name : f.species) {
    (net.species()[net.species_index(name)].is_low() ? low : high) = true;
  }
  if (low && high) return Side::Mixed;
  return high ? Side::High : Side::Low;
}

/// N-order of one factor at the initial state; nullopt if it vanishes identically there.
std::optional<Rational> factor_order(const ReactionNetwork& net, const Factor& f) {
  if (factor_side(net, f) == Side::Low) return Rational(0);
  const auto& first = net.species()[net.species_index(f.species.front())];
  switch (f.kind) {
    case FactorKind::FallingFactorial:
    case FactorKind::Power:
      if (first.z0 == 0.0) return std::nullopt;
      return first.alpha * Rational(f.degree);
    case FactorKind::Sqrt:
      if (first.z0 == 0.0) return std::nullopt;
      return first.alpha / Rational(2);
    case FactorKind::Hill:
      return Rational(0);
    case FactorKind::Log1pProduct:
      for (const auto& name : f.species) {
        const auto& s = net.species()[net.species_index(name)];
        if (!s.is_low() && s.z0 == 0.0) return std::nullopt;
      }
      return Rational(0);
  }
  return Rational(0);
}

}  // namespace

ScaledSystem::ScaledSystem(ReactionNetwork network, std::int64_t N, std::optional<Rational> gamma)
    : network_(std::move(network)), N_(N) {
  if (N < 1) throw std::invalid_argument("scaling parameter N must be a positive integer");

  for (const auto& s : network_.species()) {
    const double scale = power_of(N_, s.alpha);
    scales_.push_back(scale);
    const double raw = scale * s.z0;
    if (std::abs(raw - std::round(raw)) > 1e-9 * std::max(1.0, raw)) {
      warnings_.push_back("initial count of '" + s.name + "' (" + format_decimal(raw) +
                          ") is not an integer; rounded to nearest");
    }
  }

  std::optional<Rational> best;
  for (const auto& r : network_.reactions()) {
    std::optional<Rational> order = r.law.beta;
    for (const auto& f : r.law.factors) {
      auto fo = factor_order(network_, f);
      if (!fo) {
        order.reset();
        warnings_.push_back("reaction '" + r.id + "' has a degenerate initial intensity (a high-copy factor is zero)");
        break;
      }
      *order += *fo;
    }
    if (order && (!best || *order > *best)) best = order;
    orders_.push_back(order);
  }
  theta0_ = best.value_or(Rational(0));
  for (const auto& o : orders_) dominant_.push_back(o && *o == theta0_);
  if (!best && network_.reaction_count() > 0) {
    warnings_.push_back("no reaction has a nonzero initial intensity; theta0 set to 0");
  }
  gamma_ = gamma.value_or(-theta0_);
}

ScaledState ScaledSystem::initial_state() const {
  ScaledState z;
  const auto d = network_.low_count();
  for (std::size_t i = 0; i < network_.species_count(); ++i) {
    const auto& s = network_.species()[i];
    if (i < d) z.low.push_back(static_cast<std::int64_t>(std::llround(s.z0)));
    else z.high.push_back(s.z0);
  }
  return z;
}

std::vector<double> ScaledSystem::raw_values(const ScaledState& z) const {
  const auto d = network_.low_count();
  if (z.low.size() != d || z.high.size() != network_.species_count() - d) {
    throw std::invalid_argument("scaled state does not match the network");
  }
  std::vector<double> x(network_.species_count());
  for (std::size_t i = 0; i < d; ++i) x[i] = static_cast<double>(z.low[i]);
  for (std::size_t i = d; i < x.size(); ++i) x[i] = scales_[i] * z.high[i - d];
  return x;
}

ScaledState ScaledSystem::scaled_from_raw(std::span<const std::int64_t> counts) const {
  ScaledState z;
  const auto d = network_.low_count();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i < d) z.low.push_back(counts[i]);
    else z.high.push_back(static_cast<double>(counts[i]) / scales_[i]);
  }
  return z;
}

std::optional<Rational> intensity_order(const ScaledSystem& sys, std::string_view id) {
  return sys.order(sys.network().reaction_index(id));
}

Classification classify_reactions(const ScaledSystem& sys) {
  Classification c;
  const auto& reactions = sys.network().reactions();
  for (std::size_t k = 0; k < reactions.size(); ++k) {
    (sys.is_dominant(k) ? c.dominant : c.negligible).push_back(reactions[k].id);
  }
  return c;
}

double scaled_intensity(const ScaledSystem& sys, std::size_t k, const ScaledState& z) {
  const auto& r = sys.network().reactions().at(k);
  const auto x = sys.raw_values(z);
  const double value = sys.network().propensity(k, x);
  if (value == 0.0) return 0.0;
  return power_of(sys.N(), sys.gamma() + r.law.beta) * value;
}

double scaled_intensity(const ScaledSystem& sys, std::string_view id, const ScaledState& z) {
  return scaled_intensity(sys, sys.network().reaction_index(id), z);
}

double IntensitySplit::low(std::span<const std::int64_t> low_counts) const {
  double value = 1.0;
  std::vector<double> args;
  for (const auto& b : low_bound_) {
    args.clear();
    for (auto i : b.index) args.push_back(static_cast<double>(low_counts[i]));
    value *= b.factor.evaluate(args);
  }
  return value;
}

double IntensitySplit::high(std::span<const double> high_values) const {
  double value = prefactor_;
  std::vector<double> args;
  for (const auto& b : high_bound_) {
    args.clear();
    for (auto i : b.index) args.push_back(scales_[i] * high_values[i - low_count_]);
    value *= b.factor.evaluate(args);
  }
  return value;
}

double IntensitySplit::high_from_raw(std::span<const std::int64_t> raw_counts) const {
  double value = prefactor_;
  double args[8];
  std::vector<double> spill;
  for (const auto& b : high_bound_) {
    std::span<const double> view;
    if (b.index.size() <= 8) {
      for (std::size_t j = 0; j < b.index.size(); ++j) args[j] = static_cast<double>(raw_counts[b.index[j]]);
      view = std::span<const double>(args, b.index.size());
    } else {
      spill.clear();
      for (auto i : b.index) spill.push_back(static_cast<double>(raw_counts[i]));
      view = spill;
    }
    value *= b.factor.evaluate(view);
  }
  return value;
}

IntensitySplit decompose_intensity(const ScaledSystem& sys, std::size_t k, const Rational& gamma) {
  const auto& net = sys.network();
  const auto& r = net.reactions().at(k);
  IntensitySplit split;
  split.kappa_ = r.law.kappa;
  split.prefactor_ = power_of(sys.N(), gamma + r.law.beta);
  split.low_count_ = net.low_count();
  for (std::size_t i = 0; i < net.species_count(); ++i) split.scales_.push_back(sys.species_scale(i));

  for (const auto& f : r.law.factors) {
    IntensitySplit::Bound bound{f, {}};
    for (const auto& name : f.species) bound.index.push_back(net.species_index(name));
    switch (factor_side(net, f)) {
      case Side::Mixed:
        throw ConditionError("reaction '" + r.id + "': factor " + f.to_string() +
                             " couples low- and high-copy species");
      case Side::Low:
        split.low_factors_.push_back(f);
        split.low_bound_.push_back(std::move(bound));
        break;
      case Side::High:
        split.high_factors_.push_back(f);
        split.high_bound_.push_back(std::move(bound));
        break;
    }
  }
  return split;
}

IntensitySplit decompose_intensity(const ScaledSystem& sys, std::string_view id) {
  return decompose_intensity(sys, sys.network().reaction_index(id), sys.gamma());
}

bool ConditionReport::all_pass() const {
  return std::all_of(reactions.begin(), reactions.end(),
                     [](const ReactionConditions& r) { return r.cd1 && r.cd2 && r.cd3; });
}

ConditionReport validate_conditions(const ScaledSystem& sys) {
  const auto& net = sys.network();
  ConditionReport report;
  for (std::size_t k = 0; k < net.reaction_count(); ++k) {
    const auto& r = net.reactions()[k];
    ReactionConditions rc;
    rc.id = r.id;

    Rational high_order = sys.gamma() + r.law.beta;
    bool degenerate = false;
    bool log_growth = false;
    for (const auto& f : r.law.factors) {
      const auto side = factor_side(net, f);
      if (side == Side::Mixed) {
        rc.cd1 = false;
        rc.failures.push_back("CD1: factor " + f.to_string() + " couples low- and high-copy species");
        continue;
      }
      if (side == Side::Low) continue;
      // Every catalog kind is polynomially bounded, so CD2 only fails through CD1.
      auto fo = factor_order(net, f);
      if (!fo) {
        degenerate = true;
        continue;
      }
      high_order += *fo;
      if (f.kind == FactorKind::Log1pProduct) log_growth = true;
      if (f.kind != FactorKind::FallingFactorial && f.kind != FactorKind::Power) {
        rc.notes.push_back("order of " + f.to_string() +
                           " on high-copy species uses the catalog convention (hill, log1p: 0; sqrt: alpha/2)");
      }
    }
    if (!rc.cd1) rc.cd2 = false;

    if (degenerate) {
      rc.notes.push_back("high-copy part vanishes at the initial state; limit is 0");
    } else if (high_order > 0) {
      rc.cd3 = false;
      rc.failures.push_back("CD3: high-copy part grows like N^" + to_string(high_order));
    } else if (high_order.numerator() == 0 && log_growth) {
      rc.cd3 = false;
      rc.failures.push_back("CD3: logarithmic growth of a high-copy log1p factor has no finite limit");
    }
    report.reactions.push_back(std::move(rc));
  }
  return report;
}

CompactSetMonitor::CompactSetMonitor(const ScaledSystem& sys, std::vector<double> limits, double M)
    : low_count_(sys.network().low_count()),
      M_(M),
      tolerance_(M / static_cast<double>(sys.N())),
      limits_(std::move(limits)) {
  if (limits_.size() != sys.network().reaction_count()) {
    throw std::invalid_argument("one limit factor per reaction is required");
  }
  for (std::size_t k = 0; k < sys.network().reaction_count(); ++k) {
    if (!sys.is_dominant(k)) continue;
    dominant_.push_back(k);
    splits_.push_back(decompose_intensity(sys, k, -sys.theta0()));
  }
}

bool CompactSetMonitor::contains(const ScaledState& z) const {
  for (auto v : z.low) {
    if (static_cast<double>(v) > M_) return false;
  }
  for (std::size_t j = 0; j < dominant_.size(); ++j) {
    if (std::abs(splits_[j].high(z.high) - limits_[dominant_[j]]) > tolerance_) return false;
  }
  return true;
}

bool CompactSetMonitor::contains_raw(std::span<const std::int64_t> raw_counts) const {
  for (std::size_t i = 0; i < low_count_; ++i) {
    if (static_cast<double>(raw_counts[i]) > M_) return false;
  }
  for (std::size_t j = 0; j < dominant_.size(); ++j) {
    if (std::abs(splits_[j].high_from_raw(raw_counts) - limits_[dominant_[j]]) > tolerance_) return false;
  }
  return true;
}

bool in_compact_set(const ScaledSystem& sys, std::span<const double> limits, const ScaledState& z, double M) {
  return CompactSetMonitor(sys, std::vector<double>(limits.begin(), limits.end()), M).contains(z);
}

}  // namespace mssr
