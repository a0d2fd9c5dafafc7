#include "mssr/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mssr/projection.hpp"
#include "mssr/random.hpp"
#include "mssr/scaling.hpp"
#include "mssr/ssa.hpp"

namespace mssr {

bool LemmaReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const LemmaCheck& c) { return c.passed; });
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::int64_t uniform_int(PhiloxStream& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(rng() % span);
}

/// Random points of S_M: low counts uniform on {0..floor(M)}, high counts jittered around
/// the initial state and kept only if every dominant high part stays within M/N of s_k.
std::vector<ScaledState> sample_compact_set(const ScaledSystem& sys, const CompactSetMonitor& monitor,
                                            std::size_t count, PhiloxStream& rng) {
  const auto& net = sys.network();
  const auto d = net.low_count();
  const auto top = static_cast<std::int64_t>(std::floor(monitor.M()));
  const auto x0 = net.initial_counts(sys.N());
  const double tolerance = monitor.M() / static_cast<double>(sys.N());

  std::vector<ScaledState> states;
  std::vector<std::int64_t> raw(net.species_count());
  for (std::size_t n = 0; n < count; ++n) {
    double shrink = 1.0;
    for (int attempt = 0;; ++attempt) {
      if (attempt > 0 && attempt % 10 == 0) shrink *= 0.5;
      if (attempt > 400) throw std::runtime_error("could not sample the compact set S_M");
      for (std::size_t i = 0; i < d; ++i) raw[i] = uniform_int(rng, 0, top);
      for (std::size_t i = d; i < raw.size(); ++i) {
        const auto width = static_cast<std::int64_t>(std::floor(shrink * tolerance * sys.species_scale(i)));
        raw[i] = std::max<std::int64_t>(0, x0[i] + uniform_int(rng, -width, width));
      }
      if (monitor.contains_raw(raw)) break;
    }
    states.push_back(sys.scaled_from_raw(raw));
  }
  return states;
}

struct GapSetup {
  ScaledSystem sys;
  std::vector<double> s;
  std::vector<IntensitySplit> splits;
  std::vector<bool> changes_low;
  double M;
};

GapSetup make_setup(const ReactionNetwork& net, std::int64_t N, double rho) {
  ScaledSystem sys(net, N);
  auto s = limit_factors(sys);
  std::vector<IntensitySplit> splits;
  std::vector<bool> changes_low;
  for (std::size_t k = 0; k < net.reaction_count(); ++k) {
    splits.push_back(decompose_intensity(sys, k, -sys.theta0()));
    const auto& r = net.reactions()[k];
    changes_low.push_back(project_complex(net, r.source).low != project_complex(net, r.target).low);
  }
  const double M = std::pow(static_cast<double>(N), rho);
  return GapSetup{std::move(sys), std::move(s), std::move(splits), std::move(changes_low), M};
}

}  // namespace

LemmaReport intensity_gap_check(const ReactionNetwork& net, const LemmaOptions& options) {
  LemmaReport report;
  const double rho = options.rho;
  const double nu1 = 1.0 - rho;

  // nu2 = 1 - rho (max ||q_L(y_k)||_inf + 1) over negligible reactions.
  const ScaledSystem probe(net, options.fit_N);
  int max_low = 0;
  std::size_t negligible = 0;
  for (std::size_t k = 0; k < net.reaction_count(); ++k) {
    if (probe.is_dominant(k)) continue;
    ++negligible;
    const auto split = project_complex(net, net.reactions()[k].source);
    for (const auto& [name, c] : split.low.terms()) max_low = std::max(max_low, c);
  }
  const double nu2 = 1.0 - rho * (max_low + 1);

  auto negligible_peak = [&](const GapSetup& g, const std::vector<ScaledState>& states) {
    double peak = 0.0;
    for (const auto& z : states) {
      for (std::size_t k = 0; k < net.reaction_count(); ++k) {
        if (!g.sys.is_dominant(k)) peak = std::max(peak, scaled_intensity(g.sys, k, z));
      }
    }
    return peak;
  };

  std::uint64_t stream = 0;
  double c_fit = 0.0;
  {
    const auto g = make_setup(net, options.fit_N, rho);
    const CompactSetMonitor monitor(g.sys, g.s, g.M);
    PhiloxStream rng(options.seed, stream++);
    const auto states = sample_compact_set(g.sys, monitor, options.states, rng);
    c_fit = negligible_peak(g, states) * std::pow(static_cast<double>(options.fit_N), nu2);
  }

  LemmaCheck gap_i{"intensity-gap (i)", true, "", {}};
  LemmaCheck gap_ii{"intensity-gap (ii)", true, "", {}};
  LemmaCheck gap_iii{"intensity-gap (iii)", true, "", {}};
  gap_ii.measured["nu2"] = nu2;
  gap_ii.measured["c_fit"] = c_fit;
  gap_ii.measured["fit_N"] = static_cast<double>(options.fit_N);
  if (nu2 <= 0.0) gap_ii.detail = "nu2 <= 0 for this rho; bound is not decaying. ";

  for (auto N : options.gap_grid) {
    const auto g = make_setup(net, N, rho);
    const CompactSetMonitor monitor(g.sys, g.s, g.M);
    PhiloxStream rng(options.seed, stream++);
    const auto states = sample_compact_set(g.sys, monitor, options.states, rng);
    const auto proj = build_projected_system(g.sys);
    const auto& reduced = proj.network();
    const double inv = static_cast<double>(N);

    double c3 = c_fit * static_cast<double>(negligible);
    for (const auto& u : proj.reactions()) {
      double kappa_sum = 0.0;
      for (const auto& p : u.provenance) kappa_sum += p.kappa;
      c3 = std::max(c3, kappa_sum / u.kappa_bar);
    }

    double worst_i = 0.0, worst_ii = 0.0, worst_iii = 0.0;
    std::vector<double> low(reduced.species_count());
    for (const auto& z : states) {
      double total = 0.0;
      for (std::size_t k = 0; k < net.reaction_count(); ++k) {
        const double lambda = scaled_intensity(g.sys, k, z);
        if (g.changes_low[k]) total += lambda;
        if (g.sys.is_dominant(k)) {
          const double lam_l = g.splits[k].kappa() * g.splits[k].low(z.low);
          const double gap = std::abs(lambda - g.s[k] * lam_l);
          const double bound = lam_l * g.M / inv;
          const double ratio = bound > 0.0 ? gap / bound : (gap > 1e-12 ? kInf : 0.0);
          worst_i = std::max(worst_i, ratio);
        } else {
          const double limit = c_fit * std::pow(inv, -nu2);
          worst_ii = std::max(worst_ii, limit > 0.0 ? lambda / limit : (lambda > 0.0 ? kInf : 0.0));
        }
      }
      for (std::size_t i = 0; i < low.size(); ++i) low[i] = static_cast<double>(z.low[i]);
      double reduced_total = 0.0;
      for (std::size_t u = 0; u < reduced.reaction_count(); ++u) reduced_total += reduced.propensity(u, low);

      // Scaled distance of the total from the reduced total: 1 means on the (iii) envelope.
      const double below = c3 * std::pow(inv, -nu1) * reduced_total;
      const double above = below + c3 * std::pow(inv, -nu2);
      const double slack = 1e-9 * std::max(1.0, reduced_total);
      const double excess = total - reduced_total;
      const double room = excess < 0.0 ? below : above;
      worst_iii = std::max(worst_iii, std::abs(excess) <= slack ? 0.0 : std::abs(excess) / std::max(room, 1e-300));
    }
    if (negligible == 0) worst_ii = 0.0;

    const std::string tag = "N=" + std::to_string(N);
    gap_i.measured[tag + " max gap/bound"] = worst_i;
    gap_ii.measured[tag + " max lambda/(c N^-nu2)"] = worst_ii;
    gap_iii.measured[tag + " max |total-reduced|/width"] = worst_iii;
    gap_iii.measured[tag + " c"] = c3;
    gap_i.passed = gap_i.passed && worst_i <= 1.0 + 1e-9;
    gap_ii.passed = gap_ii.passed && worst_ii <= 1.0 + 1e-9;
    gap_iii.passed = gap_iii.passed && worst_iii <= 1.0 + 1e-9;
  }
  gap_i.detail = std::to_string(options.states) + " random S_M states per N, rho=" + format_decimal(rho);
  gap_ii.detail += negligible == 0 ? "no negligible reactions" : "constant fitted at N=" + std::to_string(options.fit_N);
  gap_iii.detail = "sums over reactions that change low-copy counts";
  report.checks = {gap_i, gap_ii, gap_iii};
  return report;
}

LemmaReport jump_moment_check(const ReactionNetwork& net, const LemmaOptions& options) {
  if (options.jump_times.empty()) throw std::invalid_argument("no jump-moment times");
  const ScaledSystem sys(net, options.gap_grid.empty() ? 1000 : options.gap_grid.back());
  const auto proj = build_projected_system(sys);
  LemmaCheck check{"jump-moment", true, "", {}};

  double c = 0.0;
  for (std::size_t j = 0; j < options.jump_times.size(); ++j) {
    const double t = options.jump_times[j];
    SimulationConfig cfg;
    cfg.T = t;
    cfg.samples = options.jump_samples;
    cfg.base_seed = options.seed + 1000 + j;
    cfg.threads = options.threads;
    const auto moment = jump_moment_estimate(simulate_reduced(proj, cfg), 2);
    const double scale = std::max(1.0, t * t);
    if (j == 0) c = moment.value / scale;
    const double bound = options.jump_safety * c * scale;
    const std::string tag = "t=" + format_decimal(t);
    check.measured[tag + " E(J^2)"] = moment.value;
    check.measured[tag + " bound"] = bound;
    if (moment.value > bound) check.passed = false;
  }
  check.measured["c"] = c;
  check.detail = "projected system; c fitted at t=" + format_decimal(options.jump_times.front()) +
                 ", safety factor " + format_decimal(options.jump_safety);
  LemmaReport report;
  report.checks.push_back(check);
  return report;
}

LemmaReport exit_probability_check(const ReactionNetwork& net, const LemmaOptions& options) {
  LemmaCheck check{"exit-probability", true, "", {}};
  std::vector<ProportionEstimate> estimates;
  for (std::size_t j = 0; j < options.exit_grid.size(); ++j) {
    const auto N = options.exit_grid[j];
    const ScaledSystem sys(net, N);
    SimulationConfig cfg;
    cfg.T = options.exit_T;
    cfg.samples = options.exit_samples;
    cfg.base_seed = options.seed + 2000 + j;
    cfg.exit_M = std::pow(static_cast<double>(N), options.rho);
    cfg.threads = options.threads;
    cfg.record = {net.species().front().name};
    const auto e = exit_probability_estimate(sys, cfg);
    const std::string tag = "N=" + std::to_string(N);
    check.measured[tag + " p"] = e.p;
    check.measured[tag + " lower"] = e.lower;
    check.measured[tag + " upper"] = e.upper;
    if (!estimates.empty()) {
      const auto& prev = estimates.back();
      const double noise = 2.0 * std::hypot(prev.standard_error, e.standard_error);
      if (e.p > prev.p + noise) check.passed = false;
    }
    estimates.push_back(e);
  }
  check.detail = "M=N^" + format_decimal(options.rho) + ", T=" + format_decimal(options.exit_T) + ", " +
                 std::to_string(options.exit_samples) + " trajectories per N";
  LemmaReport report;
  report.checks.push_back(check);
  return report;
}

LemmaReport lemma_harness(const ReactionNetwork& net, const std::string& which, const LemmaOptions& options) {
  LemmaReport report;
  auto append = [&](LemmaReport part) {
    for (auto& c : part.checks) report.checks.push_back(std::move(c));
  };
  const bool all = which == "all";
  if (!all && which != "intensity-gap" && which != "jump-moment" && which != "exit-probability") {
    throw std::invalid_argument("unknown lemma check '" + which + "'");
  }
  if (all || which == "intensity-gap") append(intensity_gap_check(net, options));
  if (all || which == "jump-moment") append(jump_moment_check(net, options));
  if (all || which == "exit-probability") append(exit_probability_check(net, options));
  return report;
}

}  // namespace mssr
