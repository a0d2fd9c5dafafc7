#include "mssr/ssa.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

#include "mssr/error.hpp"
#include "mssr/random.hpp"

namespace mssr {

std::size_t TrajectoryEnsemble::capped_count() const {
  return static_cast<std::size_t>(
      std::count_if(trajectories.begin(), trajectories.end(), [](const Trajectory& t) { return t.capped; }));
}

namespace {

struct Engine {
  const ReactionNetwork* net = nullptr;
  std::vector<double> multiplier;
  std::vector<std::int64_t> initial;
  std::vector<std::size_t> record_index;
  std::vector<double> record_scale;
  std::vector<std::vector<std::size_t>> dependents;
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> changes;
  const CompactSetMonitor* monitor = nullptr;
};

Engine make_engine(const ReactionNetwork& net, std::vector<double> multiplier, std::vector<std::int64_t> initial,
                   const std::vector<double>& scales, const SimulationConfig& cfg, TrajectoryEnsemble& ens) {
  Engine e;
  e.net = &net;
  e.multiplier = std::move(multiplier);
  e.initial = std::move(initial);

  if (cfg.record.empty()) {
    for (std::size_t i = 0; i < net.species_count(); ++i) e.record_index.push_back(i);
  } else {
    for (const auto& name : cfg.record) e.record_index.push_back(net.species_index(name));
  }
  for (auto i : e.record_index) {
    ens.species.push_back(net.species()[i].name);
    ens.low.push_back(net.species()[i].is_low());
    e.record_scale.push_back(scales[i]);
  }

  std::vector<std::set<std::size_t>> reads(net.reaction_count());
  for (std::size_t k = 0; k < net.reaction_count(); ++k) {
    const auto& r = net.reactions()[k];
    for (const auto& [name, _] : r.source.terms()) reads[k].insert(net.species_index(name));
    for (const auto& f : r.law.factors) {
      for (const auto& name : f.species) reads[k].insert(net.species_index(name));
    }
  }
  for (std::size_t k = 0; k < net.reaction_count(); ++k) {
    const auto& change = net.stoichiometry(k);
    std::vector<std::pair<std::size_t, std::int64_t>> sparse;
    for (std::size_t i = 0; i < change.size(); ++i) {
      if (change[i] != 0) sparse.emplace_back(i, change[i]);
    }
    std::vector<std::size_t> deps;
    for (std::size_t j = 0; j < net.reaction_count(); ++j) {
      if (std::any_of(sparse.begin(), sparse.end(), [&](const auto& c) { return reads[j].contains(c.first); })) {
        deps.push_back(j);
      }
    }
    e.changes.push_back(std::move(sparse));
    e.dependents.push_back(std::move(deps));
  }
  return e;
}

Trajectory run_one(const Engine& e, const SimulationConfig& cfg, std::uint64_t index) {
  PhiloxStream rng(cfg.base_seed, index);
  const auto& net = *e.net;
  const std::size_t R = net.reaction_count();

  std::vector<std::int64_t> counts = e.initial;
  std::vector<double> x(counts.begin(), counts.end());
  std::vector<double> a(R);
  for (std::size_t k = 0; k < R; ++k) a[k] = e.multiplier[k] * net.propensity(k, x);

  Trajectory traj;
  if (e.monitor && !e.monitor->contains_raw(counts)) traj.exited = true;

  double t = 0.0;
  while (true) {
    double total = 0.0;
    for (double v : a) total += v;
    if (!(total > 0.0)) break;
    t += rng.exponential(total);
    if (t > cfg.T) break;

    const double target = rng.uniform_open() * total;
    double cumulative = 0.0;
    std::size_t chosen = R;
    for (std::size_t k = 0; k < R; ++k) {
      if (a[k] <= 0.0) continue;
      chosen = k;
      cumulative += a[k];
      if (target <= cumulative) break;
    }

    for (const auto& [i, delta] : e.changes[chosen]) {
      counts[i] += delta;
      x[i] = static_cast<double>(counts[i]);
    }
    for (auto j : e.dependents[chosen]) a[j] = e.multiplier[j] * net.propensity(j, x);
    ++traj.jumps;

    if (e.monitor && !traj.exited && !e.monitor->contains_raw(counts)) {
      traj.exited = true;
      traj.exit_time = t;
    }
    if (traj.jumps >= cfg.max_jumps) {
      traj.capped = true;
      break;
    }
  }

  for (std::size_t j = 0; j < e.record_index.size(); ++j) {
    traj.observed.push_back(static_cast<double>(counts[e.record_index[j]]) / e.record_scale[j]);
  }
  return traj;
}

void run_ensemble(const Engine& e, const SimulationConfig& cfg, TrajectoryEnsemble& ens) {
  if (!(cfg.T >= 0.0) || !std::isfinite(cfg.T)) throw std::invalid_argument("horizon T must be finite and >= 0");
  if (cfg.samples < 1) throw std::invalid_argument("samples must be at least 1");
  if (cfg.max_jumps < 1) throw std::invalid_argument("max_jumps must be at least 1");
  ens.base_seed = cfg.base_seed;
  ens.T = cfg.T;
  ens.trajectories.resize(cfg.samples);

  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cfg.samples));
  std::atomic<std::size_t> next{0};
  constexpr std::size_t chunk = 64;
  auto worker = [&] {
    for (std::size_t start = next.fetch_add(chunk); start < cfg.samples; start = next.fetch_add(chunk)) {
      const auto stop = std::min(cfg.samples, start + chunk);
      for (std::size_t i = start; i < stop; ++i) ens.trajectories[i] = run_one(e, cfg, i);
    }
  };
  if (threads <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace

TrajectoryEnsemble simulate_original(const ScaledSystem& sys, const SimulationConfig& cfg) {
  const auto& net = sys.network();
  std::vector<double> multiplier, scales;
  for (const auto& r : net.reactions()) multiplier.push_back(power_of(sys.N(), sys.gamma() + r.law.beta));
  for (std::size_t i = 0; i < net.species_count(); ++i) scales.push_back(sys.species_scale(i));

  TrajectoryEnsemble ens;
  Engine e = make_engine(net, std::move(multiplier), net.initial_counts(sys.N()), scales, cfg, ens);
  std::optional<CompactSetMonitor> monitor;
  if (cfg.exit_M) {
    monitor.emplace(sys, limit_factors(sys), *cfg.exit_M);
    e.monitor = &*monitor;
  }
  run_ensemble(e, cfg, ens);
  return ens;
}

TrajectoryEnsemble simulate_reduced(const ReactionNetwork& net, const SimulationConfig& cfg) {
  if (!net.is_scale_free()) throw ValidationError("reduced simulation needs a scale-free network");
  TrajectoryEnsemble ens;
  std::vector<std::int64_t> initial;
  for (const auto& s : net.species()) initial.push_back(static_cast<std::int64_t>(std::llround(s.z0)));
  Engine e = make_engine(net, std::vector<double>(net.reaction_count(), 1.0), std::move(initial),
                         std::vector<double>(net.species_count(), 1.0), cfg, ens);
  run_ensemble(e, cfg, ens);
  return ens;
}

TrajectoryEnsemble simulate_reduced(const ProjectedSystem& proj, const SimulationConfig& cfg) {
  return simulate_reduced(proj.network(), cfg);
}

DistributionVector empirical_distribution(const TrajectoryEnsemble& ens, const std::vector<std::string>& subset) {
  std::vector<std::size_t> columns;
  for (const auto& name : subset) {
    auto it = std::find(ens.species.begin(), ens.species.end(), name);
    if (it == ens.species.end()) throw std::invalid_argument("species '" + name + "' was not recorded");
    const auto j = static_cast<std::size_t>(it - ens.species.begin());
    if (!ens.low[j]) throw std::invalid_argument("species '" + name + "' is not a low-copy species");
    columns.push_back(j);
  }
  DistributionVector dist(subset);
  std::size_t used = 0;
  for (const auto& t : ens.trajectories) {
    if (t.capped) continue;
    State s;
    for (auto j : columns) s.push_back(static_cast<std::int64_t>(std::llround(t.observed[j])));
    dist.add(s, 1.0);
    ++used;
  }
  if (used == 0) throw std::invalid_argument("ensemble has no usable trajectories");
  dist.normalize();
  return dist;
}

Estimate jump_moment_estimate(const TrajectoryEnsemble& ens, int m) {
  double sum = 0.0, sum_sq = 0.0;
  std::size_t n = 0;
  for (const auto& t : ens.trajectories) {
    if (t.capped) continue;
    const double v = std::pow(static_cast<double>(t.jumps), m);
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  if (n == 0) throw std::invalid_argument("ensemble has no usable trajectories");
  Estimate e;
  e.value = sum / static_cast<double>(n);
  if (n > 1) {
    const double var = std::max(0.0, (sum_sq - sum * e.value) / static_cast<double>(n - 1));
    e.standard_error = std::sqrt(var / static_cast<double>(n));
  }
  return e;
}

ProportionEstimate wilson_interval(std::size_t successes, std::size_t trials) {
  if (trials == 0) throw std::invalid_argument("no trials");
  constexpr double z = 1.959963984540054;
  ProportionEstimate e;
  e.successes = successes;
  e.trials = trials;
  const double n = static_cast<double>(trials);
  e.p = static_cast<double>(successes) / n;
  e.standard_error = std::sqrt(e.p * (1.0 - e.p) / n);
  const double denom = 1.0 + z * z / n;
  const double center = (e.p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(e.p * (1.0 - e.p) / n + z * z / (4.0 * n * n)) / denom;
  e.lower = successes == 0 ? 0.0 : std::max(0.0, center - half);
  e.upper = successes == trials ? 1.0 : std::min(1.0, center + half);
  return e;
}

ProportionEstimate exit_probability_estimate(const ScaledSystem& sys, const SimulationConfig& cfg) {
  if (!cfg.exit_M) throw std::invalid_argument("exit probability needs exit_M");
  const auto ens = simulate_original(sys, cfg);
  std::size_t exits = 0, trials = 0;
  for (const auto& t : ens.trajectories) {
    if (t.capped) continue;
    ++trials;
    if (t.exited) ++exits;
  }
  return wilson_interval(exits, trials);
}

}  // namespace mssr
