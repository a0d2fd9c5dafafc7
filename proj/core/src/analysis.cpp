#include "mssr/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "mssr/cme.hpp"
#include "mssr/error.hpp"
#include "mssr/projection.hpp"
#include "mssr/scaling.hpp"

namespace mssr {

double event_probability(const DistributionVector& dist, const EventSet& event) {
  double p = 0.0;
  for (const auto& [state, mass] : dist.masses()) {
    if (event.contains(dist.species(), state)) p += mass;
  }
  return p;
}

ProportionEstimate event_probability(const TrajectoryEnsemble& ens, const EventSet& event) {
  std::vector<std::size_t> columns;
  std::vector<std::string> names = event.species();
  for (const auto& name : names) {
    auto it = std::find(ens.species.begin(), ens.species.end(), name);
    if (it == ens.species.end()) throw std::invalid_argument("event species '" + name + "' was not recorded");
    if (!ens.low[static_cast<std::size_t>(it - ens.species.begin())]) {
      throw std::invalid_argument("event species '" + name + "' is not a low-copy species");
    }
    columns.push_back(static_cast<std::size_t>(it - ens.species.begin()));
  }
  std::size_t hits = 0, trials = 0;
  State s(columns.size());
  for (const auto& t : ens.trajectories) {
    if (t.capped) continue;
    ++trials;
    for (std::size_t j = 0; j < columns.size(); ++j) s[j] = static_cast<std::int64_t>(std::llround(t.observed[columns[j]]));
    if (event.contains(names, s)) ++hits;
  }
  return wilson_interval(hits, trials);
}

double total_variation(const DistributionVector& p, const DistributionVector& q) {
  if (p.species() != q.species()) throw std::invalid_argument("distributions label different species");
  double sum = 0.0;
  const auto& a = p.masses();
  const auto& b = q.masses();
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      sum += std::abs(ia->second);
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      sum += std::abs(ib->second);
      ++ib;
    } else {
      sum += std::abs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return std::min(1.0, 0.5 * sum);
}

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("x and y differ in length");
  if (x.size() < 2) throw std::invalid_argument("power-law fit needs at least two points");
  const auto n = static_cast<double>(x.size());
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("power-law fit needs positive data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("power-law fit needs distinct x values");

  PowerLawFit fit;
  fit.points = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double sse = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
      sse += r * r;
    }
    fit.slope_stderr = std::sqrt(sse / (n - 2.0) / sxx);
    const boost::math::students_t dist(n - 2.0);
    const double q = boost::math::quantile(boost::math::complement(dist, 0.025));
    fit.ci_lower = fit.slope - q * fit.slope_stderr;
    fit.ci_upper = fit.slope + q * fit.slope_stderr;
  } else {
    fit.slope_stderr = std::numeric_limits<double>::infinity();
    fit.ci_lower = -std::numeric_limits<double>::infinity();
    fit.ci_upper = std::numeric_limits<double>::infinity();
  }
  return fit;
}

std::uint64_t sweep_seed(std::uint64_t base, std::size_t j) {
  return base + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(j);
}

namespace {

void check_event(const ReactionNetwork& net, const EventSet& event) {
  for (const auto& name : event.species()) {
    auto i = net.find_species(name);
    if (!i) throw std::invalid_argument("event refers to unknown species '" + name + "'");
    if (!net.species()[*i].is_low()) {
      throw std::invalid_argument("event species '" + name + "' is high-copy; events must use low-copy species");
    }
  }
}

}  // namespace

ConvergenceReport convergence_sweep(const ReactionNetwork& net, const SweepOptions& options) {
  if (options.grid.empty()) throw std::invalid_argument("empty N grid");
  for (std::size_t j = 0; j < options.grid.size(); ++j) {
    if (options.grid[j] < 1 || (j > 0 && options.grid[j] <= options.grid[j - 1])) {
      throw std::invalid_argument("N grid must be positive and strictly increasing");
    }
  }
  check_event(net, options.event);

  ConvergenceReport report;
  report.network = options.label;
  report.event = options.event.to_string();
  report.t = options.t;
  report.samples = options.samples;
  report.base_seed = options.seed;

  const ScaledSystem reference_sys(net, options.grid.back());
  const auto proj = build_projected_system(reference_sys);
  const auto names = options.event.species();

  try {
    auto gen = build_generator(proj.network(), enumerate_states(proj.network(), proj.initial_state()));
    const auto p0 = point_mass(gen.states().species(), proj.initial_state());
    const auto solution = transient_solve(gen, p0, options.t);
    report.reference_probability = event_probability(solution.p.marginal(names), options.event);
    report.reference_method = "cme (" + gen.states().describe() + ")";
  } catch (const TruncationError& e) {
    SimulationConfig cfg;
    cfg.T = options.t;
    cfg.samples = 10 * options.samples;
    cfg.base_seed = sweep_seed(options.seed, options.grid.size());
    cfg.record = names;
    cfg.threads = options.threads;
    const auto estimate = event_probability(simulate_reduced(proj, cfg), options.event);
    report.reference_probability = estimate.p;
    report.reference_stderr = estimate.standard_error;
    report.reference_method = "reduced-ssa";
    report.notes.push_back(std::string("CME reference unavailable (") + e.what() + "); used a reduced ensemble");
  }

  for (std::size_t j = 0; j < options.grid.size(); ++j) {
    SimulationConfig cfg;
    cfg.T = options.t;
    cfg.samples = options.samples;
    cfg.base_seed = sweep_seed(options.seed, j);
    cfg.record = names;
    cfg.threads = options.threads;
    const ScaledSystem sys(net, options.grid[j]);
    const auto ens = options.substitute_reduced ? simulate_reduced(proj, cfg) : simulate_original(sys, cfg);
    const auto estimate = event_probability(ens, options.event);

    ConvergencePoint point;
    point.N = options.grid[j];
    point.seed = cfg.base_seed;
    point.samples = estimate.trials;
    point.capped = ens.capped_count();
    point.probability = estimate.p;
    point.d = std::abs(estimate.p - report.reference_probability);
    point.standard_error = std::hypot(estimate.standard_error, report.reference_stderr);
    point.used_in_fit = point.standard_error < point.d;
    if (point.capped > 0) {
      report.notes.push_back("N=" + std::to_string(point.N) + ": " + std::to_string(point.capped) +
                             " trajectories hit max_jumps and were excluded");
    }
    report.points.push_back(point);
  }

  std::vector<double> xs, ys;
  for (const auto& p : report.points) {
    if (p.used_in_fit) {
      xs.push_back(static_cast<double>(p.N));
      ys.push_back(p.d);
    }
  }
  if (xs.size() >= 3) {
    report.fit = fit_power_law(xs, ys);
    report.nu = -report.fit->slope;
    report.reliable = true;
  } else {
    report.notes.push_back("fewer than 3 points have d(N) above their standard error; slope not fitted");
  }
  return report;
}

}  // namespace mssr
