#include "mssr/projection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "mssr/cme.hpp"
#include "mssr/error.hpp"

namespace mssr {

ComplexSplit project_complex(const ReactionNetwork& net, const Complex& y) {
  ComplexSplit split;
  for (const auto& [name, coefficient] : y.terms()) {
    const bool low = net.species()[net.species_index(name)].is_low();
    (low ? split.low : split.high).add(name, coefficient);
  }
  return split;
}

double limit_factor(const ScaledSystem& sys, std::size_t k) {
  if (!sys.is_dominant(k)) return 0.0;
  const auto& net = sys.network();
  const auto& r = net.reactions().at(k);
  const auto conditions = validate_conditions(sys).reactions.at(k);
  if (!conditions.cd1 || !conditions.cd3) {
    std::string why;
    for (const auto& f : conditions.failures) why += (why.empty() ? "" : "; ") + f;
    throw ConditionError("reaction '" + r.id + "' has no limit factor: " + why);
  }

  double s = 1.0;
  for (const auto& f : r.law.factors) {
    const auto& first = net.species()[net.species_index(f.species.front())];
    if (first.is_low()) continue;
    const double z = first.z0;
    switch (f.kind) {
      case FactorKind::FallingFactorial:
      case FactorKind::Power:
        s *= std::pow(z, f.degree);
        break;
      case FactorKind::Hill:
        s *= z > 0.0 ? 1.0 : 0.0;
        break;
      case FactorKind::Sqrt:
        s *= std::sqrt(z);
        break;
      case FactorKind::Log1pProduct:
        s = 0.0;  // only reachable with a degenerate argument
        break;
    }
  }
  return s;
}

double limit_factor(const ScaledSystem& sys, std::string_view id) {
  return limit_factor(sys, sys.network().reaction_index(id));
}

std::vector<double> limit_factors(const ScaledSystem& sys) {
  std::vector<double> s;
  for (std::size_t k = 0; k < sys.network().reaction_count(); ++k) s.push_back(limit_factor(sys, k));
  return s;
}

namespace {

ReactionNetwork make_network(const std::vector<Species>& species, const std::vector<ReducedReaction>& reactions) {
  std::vector<Reaction> out;
  for (const auto& rr : reactions) {
    Reaction r;
    r.id = rr.id;
    r.source = rr.source;
    r.target = rr.target;
    r.law.kappa = rr.kappa_bar;
    r.law.factors = rr.low_law;
    r.law.explicit_law = rr.low_law != mass_action_factors(rr.source);
    out.push_back(std::move(r));
  }
  return ReactionNetwork(species, std::move(out));
}

}  // namespace

ProjectedSystem::ProjectedSystem(std::vector<Species> species, std::vector<ReducedReaction> reactions,
                                 std::vector<std::string> dropped, std::vector<std::string> warnings)
    : species_(std::move(species)),
      reactions_(std::move(reactions)),
      dropped_(std::move(dropped)),
      warnings_(std::move(warnings)),
      network_(make_network(species_, reactions_)) {}

std::vector<std::int64_t> ProjectedSystem::initial_state() const {
  std::vector<std::int64_t> x;
  for (const auto& s : network_.species()) x.push_back(static_cast<std::int64_t>(std::llround(s.z0)));
  return x;
}

ProjectedSystem build_projected_system(const ScaledSystem& sys) {
  const auto& net = sys.network();
  std::vector<Species> species;
  for (std::size_t i = 0; i < net.low_count(); ++i) species.push_back(net.species()[i]);

  using Key = std::tuple<Complex, Complex, std::vector<Factor>>;
  std::map<Key, std::vector<Provenance>> groups;
  std::vector<Key> order;
  std::vector<std::string> dropped;
  std::vector<std::string> warnings = sys.warnings();

  for (std::size_t k = 0; k < net.reaction_count(); ++k) {
    if (!sys.is_dominant(k)) continue;
    const auto& r = net.reactions()[k];
    const double s = limit_factor(sys, k);
    const auto source = project_complex(net, r.source).low;
    const auto target = project_complex(net, r.target).low;
    if (source == target) {
      dropped.push_back(r.id);
      continue;
    }
    const auto split = decompose_intensity(sys, k, -sys.theta0());
    Key key{source, target, split.low_factors()};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(Provenance{r.id, r.law.kappa, s});
  }

  // Same projected complexes with a different low-part law cannot share one kappa_bar.
  std::map<std::pair<Complex, Complex>, int> shapes;
  for (const auto& key : order) ++shapes[{std::get<0>(key), std::get<1>(key)}];
  for (const auto& [complexes, count] : shapes) {
    if (count > 1) {
      warnings.push_back("reduced reaction " + complexes.first.to_string() + " -> " + complexes.second.to_string() +
                         " has " + std::to_string(count) + " different low-part laws; kept separate");
    }
  }

  std::set<std::string> used;
  std::vector<ReducedReaction> reactions;
  for (const auto& key : order) {
    auto provenance = groups.at(key);
    std::sort(provenance.begin(), provenance.end(),
              [](const Provenance& a, const Provenance& b) { return a.id < b.id; });
    double kappa_bar = 0.0;
    std::string id;
    for (const auto& p : provenance) {
      kappa_bar += p.kappa * p.s;
      id += (id.empty() ? "" : "_") + p.id;
    }
    if (!(kappa_bar > 0.0)) {
      for (const auto& p : provenance) dropped.push_back(p.id);
      warnings.push_back("reduced reaction " + id + " has zero rate constant; dropped");
      continue;
    }
    std::string unique = id;
    for (int n = 2; used.contains(unique); ++n) unique = id + "_" + std::to_string(n);
    used.insert(unique);

    ReducedReaction rr;
    rr.id = unique;
    rr.source = std::get<0>(key);
    rr.target = std::get<1>(key);
    rr.kappa_bar = kappa_bar;
    rr.low_law = std::get<2>(key);
    rr.provenance = std::move(provenance);
    reactions.push_back(std::move(rr));
  }
  return ProjectedSystem(std::move(species), std::move(reactions), std::move(dropped), std::move(warnings));
}

namespace {

bool strongly_connected(const Eigen::SparseMatrix<double>& q) {
  const auto n = static_cast<std::size_t>(q.cols());
  std::vector<std::vector<std::size_t>> forward(n), backward(n);
  for (Eigen::Index j = 0; j < q.outerSize(); ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(q, j); it; ++it) {
      if (it.row() == j || it.value() <= 0.0) continue;
      forward[j].push_back(static_cast<std::size_t>(it.row()));
      backward[it.row()].push_back(static_cast<std::size_t>(j));
    }
  }
  auto reaches_all = [n](const std::vector<std::vector<std::size_t>>& adj) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (auto w : adj[v]) {
        if (!seen[w]) {
          seen[w] = true;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == n;
  };
  return n == 0 || (reaches_all(forward) && reaches_all(backward));
}

struct ProbeSolve {
  StationaryResult result;
  std::size_t states = 0;
  bool irreducible = false;
  bool slice = false;
  double moment_sum = 0.0;
};

ProbeSolve probe_once(const ReactionNetwork& net, const State& initial, std::int64_t box) {
  TruncationOptions options;
  options.box = box;
  auto gen = build_generator(net, enumerate_states(net, initial, options));
  ProbeSolve out;
  out.states = gen.states().size();
  out.slice = gen.states().kind() == TruncationKind::Slice;
  out.irreducible = strongly_connected(gen.matrix());
  out.result = stationary_solve(gen);

  std::vector<double> x(net.species_count());
  for (const auto& [state, mass] : out.result.pi.masses()) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(state[i]);
    double squares = 0.0;
    for (std::size_t u = 0; u < net.reaction_count(); ++u) {
      const double rate = net.propensity(u, x);
      squares += rate * rate;
    }
    out.moment_sum += squares * mass;
  }
  return out;
}

}  // namespace

StationarityReport stationarity_probe(const ProjectedSystem& proj, std::int64_t box) {
  const auto& net = proj.network();
  const auto initial = proj.initial_state();
  StationarityReport report;
  report.box = box;

  const auto first = probe_once(net, initial, box);
  report.states = first.states;
  report.irreducible = first.irreducible;
  report.residual = first.result.residual;
  report.solved = first.result.residual <= 1e-10;
  report.moment_sum = first.moment_sum;
  if (!report.irreducible) report.notes.push_back("truncated chain is reducible");
  if (!report.solved) report.notes.push_back("stationary residual above 1e-10");

  if (first.slice) {
    report.moment_sum_doubled = first.moment_sum;
    report.moments_stable = std::isfinite(first.moment_sum);
    report.notes.push_back("conservation slice: state space is finite");
    return report;
  }
  const auto second = probe_once(net, initial, 2 * box);
  report.moment_sum_doubled = second.moment_sum;
  const double scale = std::max(std::abs(first.moment_sum), 1e-300);
  report.moments_stable = std::abs(second.moment_sum - first.moment_sum) <= 0.01 * scale;
  if (!report.moments_stable) report.notes.push_back("second intensity moment changes by more than 1% when the box doubles");
  return report;
}

}  // namespace mssr
