#include "mssr/cme.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <boost/container_hash/hash.hpp>
#include <Eigen/SparseLU>

#include "mssr/error.hpp"

namespace mssr {

std::size_t StateHash::operator()(const State& s) const noexcept {
  return boost::hash_range(s.begin(), s.end());
}

StateEnumeration::StateEnumeration(std::vector<std::string> species, std::vector<State> states, TruncationKind kind,
                                   std::int64_t box)
    : species_(std::move(species)), states_(std::move(states)), kind_(kind), box_(box) {
  index_.reserve(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (!index_.emplace(states_[i], i).second) throw std::invalid_argument("duplicate state in enumeration");
  }
}

std::optional<std::size_t> StateEnumeration::find(const State& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string StateEnumeration::describe() const {
  return kind_ == TruncationKind::Slice ? "slice" : "box M=" + std::to_string(box_);
}

namespace {

std::vector<std::string> species_names(const ReactionNetwork& net) {
  std::vector<std::string> names;
  for (const auto& s : net.species()) names.push_back(s.name);
  return names;
}

/// True when every species has a nonnegative conservation vector with a positive entry on it.
bool conservation_bounds_all(const ReactionNetwork& net) {
  const auto laws = conservation_laws(net);
  std::vector<bool> bounded(net.species_count(), false);
  for (auto w : laws) {
    const bool nonpositive = std::all_of(w.begin(), w.end(), [](std::int64_t v) { return v <= 0; });
    if (nonpositive) {
      for (auto& v : w) v = -v;
    }
    if (!std::all_of(w.begin(), w.end(), [](std::int64_t v) { return v >= 0; })) continue;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] > 0) bounded[i] = true;
    }
  }
  return std::all_of(bounded.begin(), bounded.end(), [](bool b) { return b; });
}

}  // namespace

StateEnumeration enumerate_states(const ReactionNetwork& net, const State& initial, const TruncationOptions& options) {
  if (!net.is_scale_free()) {
    throw ValidationError("master-equation solver needs a scale-free (projected) network");
  }
  if (initial.size() != net.species_count()) throw std::invalid_argument("initial state has the wrong size");
  if (std::any_of(initial.begin(), initial.end(), [](std::int64_t v) { return v < 0; })) {
    throw std::invalid_argument("initial state has a negative count");
  }

  const bool slice = options.prefer_slice && net.species_count() > 0 && conservation_bounds_all(net);
  std::int64_t box = 0;
  if (!slice) {
    const auto largest = initial.empty() ? 0 : *std::max_element(initial.begin(), initial.end());
    box = options.box.value_or(std::max<std::int64_t>(40, 4 * largest));
    if (box < largest) throw std::invalid_argument("box bound is below the initial state");
  }

  std::vector<State> states{initial};
  std::unordered_map<State, std::size_t, StateHash> seen{{initial, 0}};
  std::vector<double> x(net.species_count());
  for (std::size_t head = 0; head < states.size(); ++head) {
    const State current = states[head];
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(current[i]);
    for (std::size_t k = 0; k < net.reaction_count(); ++k) {
      if (net.propensity(k, x) <= 0.0) continue;
      State next = current;
      const auto& change = net.stoichiometry(k);
      bool inside = true;
      for (std::size_t i = 0; i < next.size(); ++i) {
        next[i] += change[i];
        if (next[i] < 0 || (!slice && next[i] > box)) inside = false;
      }
      if (!inside || seen.contains(next)) continue;
      if (states.size() >= options.state_cap) {
        throw TruncationError("state enumeration exceeds the cap of " + std::to_string(options.state_cap) +
                              " states; use a smaller box");
      }
      seen.emplace(next, states.size());
      states.push_back(std::move(next));
    }
  }
  return StateEnumeration(species_names(net), std::move(states), slice ? TruncationKind::Slice : TruncationKind::Box,
                          box);
}

GeneratorMatrix::GeneratorMatrix(StateEnumeration states, Eigen::SparseMatrix<double> q, Eigen::VectorXd outflow)
    : states_(std::move(states)), q_(std::move(q)), outflow_(std::move(outflow)) {
  q_.makeCompressed();
  for (Eigen::Index j = 0; j < q_.cols(); ++j) max_exit_ = std::max(max_exit_, -q_.coeff(j, j));
}

Eigen::SparseMatrix<double> GeneratorMatrix::reflecting() const {
  Eigen::SparseMatrix<double> r = q_;
  for (Eigen::Index j = 0; j < r.cols(); ++j) {
    if (outflow_[j] != 0.0) r.coeffRef(j, j) += outflow_[j];
  }
  r.makeCompressed();
  return r;
}

GeneratorMatrix build_generator(const ReactionNetwork& net, StateEnumeration states) {
  const auto n = static_cast<Eigen::Index>(states.size());
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd outflow = Eigen::VectorXd::Zero(n);
  std::vector<double> x(net.species_count());
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& current = states.state(static_cast<std::size_t>(j));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(current[i]);
    double exit = 0.0;
    for (std::size_t k = 0; k < net.reaction_count(); ++k) {
      const double rate = net.propensity(k, x);
      if (rate <= 0.0) continue;
      State next = current;
      const auto& change = net.stoichiometry(k);
      for (std::size_t i = 0; i < next.size(); ++i) next[i] += change[i];
      exit += rate;
      if (auto target = states.find(next)) {
        triplets.emplace_back(static_cast<Eigen::Index>(*target), j, rate);
      } else {
        outflow[j] += rate;
      }
    }
    if (exit > 0.0) triplets.emplace_back(j, j, -exit);
  }
  Eigen::SparseMatrix<double> q(n, n);
  q.setFromTriplets(triplets.begin(), triplets.end());
  return GeneratorMatrix(std::move(states), std::move(q), std::move(outflow));
}

namespace {

Eigen::VectorXd to_vector(const GeneratorMatrix& gen, const DistributionVector& p) {
  if (p.species() != gen.states().species()) {
    throw std::invalid_argument("distribution species do not match the enumeration");
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(gen.states().size()));
  for (const auto& [state, mass] : p.masses()) {
    auto i = gen.states().find(state);
    if (!i) {
      if (mass == 0.0) continue;
      throw std::invalid_argument("initial distribution has mass outside the enumeration");
    }
    v[static_cast<Eigen::Index>(*i)] = mass;
  }
  return v;
}

DistributionVector to_distribution(const GeneratorMatrix& gen, const Eigen::VectorXd& v) {
  DistributionVector p(gen.states().species());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] > 0.0) p.add(gen.states().state(static_cast<std::size_t>(i)), v[i]);
  }
  return p;
}

/// Poisson(lambda) pmf for n = 0.. until the remaining tail is below `tail`.
std::vector<double> poisson_weights(double lambda, double tail) {
  std::vector<double> w;
  double cumulative = 0.0;
  const double log_lambda = std::log(lambda);
  for (std::size_t n = 0;; ++n) {
    const double value = std::exp(-lambda + static_cast<double>(n) * log_lambda - std::lgamma(static_cast<double>(n) + 1.0));
    w.push_back(value);
    cumulative += value;
    if (static_cast<double>(n) > lambda && 1.0 - cumulative <= tail) break;
    if (static_cast<double>(n) > lambda + 40.0 * std::sqrt(lambda) + 100.0) break;
  }
  return w;
}

}  // namespace

TransientResult transient_solve(const GeneratorMatrix& gen, const DistributionVector& p0, double t,
                                const TransientOptions& options) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("time must be finite and nonnegative");
  Eigen::VectorXd p = to_vector(gen, p0);
  const double initial_mass = p.sum();
  TransientResult result;

  const double rate = gen.max_exit_rate();
  if (t > 0.0 && rate > 0.0) {
    result.steps = static_cast<std::size_t>(std::ceil(rate * t / 20.0));
    const double dt = t / static_cast<double>(result.steps);
    const auto weights = poisson_weights(rate * dt, options.error_budget / static_cast<double>(result.steps));
    result.terms = weights.size();
    const auto& q = gen.matrix();
    Eigen::VectorXd term(p.size()), acc(p.size());
    for (std::size_t step = 0; step < result.steps; ++step) {
      term = p;
      acc = weights[0] * term;
      for (std::size_t n = 1; n < weights.size(); ++n) {
        term += (q * term) / rate;
        acc += weights[n] * term;
      }
      p = acc.cwiseMax(0.0);
    }
  }

  result.p = to_distribution(gen, p);
  result.leaked = std::max(0.0, initial_mass - p.sum());
  result.p.set_leaked(result.leaked + p0.leaked());
  if (result.leaked > options.leak_tolerance) {
    throw TruncationError("leaked probability " + format_decimal(result.leaked) + " exceeds tolerance " +
                          format_decimal(options.leak_tolerance) + " on " + gen.states().describe() +
                          "; enlarge the truncation");
  }
  return result;
}

StationaryResult stationary_solve(const GeneratorMatrix& gen) {
  const auto n = static_cast<Eigen::Index>(gen.states().size());
  const auto a = gen.reflecting();
  StationaryResult result;
  Eigen::VectorXd pi = Eigen::VectorXd::Zero(n);

  auto residual_of = [&](const Eigen::VectorXd& v) { return n == 0 ? 0.0 : (a * v).cwiseAbs().maxCoeff(); };

  bool solved = false;
  if (n == 1) {
    pi[0] = 1.0;
    solved = true;
    result.method = "trivial";
  } else if (n > 1) {
    // Replace the first balance equation by the normalization sum(pi) = 1.
    std::vector<Eigen::Triplet<double>> triplets;
    for (Eigen::Index j = 0; j < a.outerSize(); ++j) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(a, j); it; ++it) {
        if (it.row() != 0) triplets.emplace_back(it.row(), j, it.value());
      }
      triplets.emplace_back(0, j, 1.0);
    }
    Eigen::SparseMatrix<double> m(n, n);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(m);
    if (lu.info() == Eigen::Success) {
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
      rhs[0] = 1.0;
      Eigen::VectorXd candidate = lu.solve(rhs);
      if (lu.info() == Eigen::Success && candidate.allFinite() && candidate.minCoeff() > -1e-12) {
        candidate = candidate.cwiseMax(0.0);
        candidate /= candidate.sum();
        if (residual_of(candidate) <= 1e-10) {
          pi = candidate;
          solved = true;
          result.method = "sparse-lu";
        }
      }
    }
    if (!solved) {
      // Power iteration on the uniformized kernel, started from the initial state.
      const double rate = 1.05 * std::max(gen.max_exit_rate(), 1e-300);
      pi[0] = 1.0;
      Eigen::VectorXd next(n);
      for (int iter = 0; iter < 2'000'000; ++iter) {
        next = pi + (a * pi) / rate;
        next = next.cwiseMax(0.0);
        next /= next.sum();
        const double change = (next - pi).lpNorm<1>();
        pi.swap(next);
        if (change < 1e-15) break;
      }
      result.method = "power-iteration";
    }
  }

  result.residual = residual_of(pi);
  result.boundary_flux = n == 0 ? 0.0 : gen.outflow().dot(pi);
  result.pi = to_distribution(gen, pi);
  return result;
}

DistributionVector birth_death_reference(double birth, double death, std::int64_t n0, double t,
                                         const std::string& species) {
  if (birth < 0.0 || death < 0.0 || n0 < 0 || t < 0.0) throw std::invalid_argument("negative birth-death parameter");
  const double survive = std::exp(-death * t);
  const double mean = death > 0.0 ? birth / death * (1.0 - survive) : birth * t;

  std::vector<double> binomial(static_cast<std::size_t>(n0) + 1, 0.0);
  for (std::int64_t k = 0; k <= n0; ++k) {
    if (survive == 1.0) {
      binomial[static_cast<std::size_t>(k)] = k == n0 ? 1.0 : 0.0;
    } else if (survive == 0.0) {
      binomial[static_cast<std::size_t>(k)] = k == 0 ? 1.0 : 0.0;
    } else {
      const double log_choose = std::lgamma(n0 + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n0 - k + 1.0);
      binomial[static_cast<std::size_t>(k)] =
          std::exp(log_choose + k * std::log(survive) + (n0 - k) * std::log1p(-survive));
    }
  }
  std::vector<double> poisson;
  if (mean == 0.0) {
    poisson = {1.0};
  } else {
    poisson = poisson_weights(mean, 1e-16);
  }

  DistributionVector p({species});
  for (std::size_t i = 0; i < binomial.size(); ++i) {
    if (binomial[i] == 0.0) continue;
    for (std::size_t j = 0; j < poisson.size(); ++j) {
      const double m = binomial[i] * poisson[j];
      if (m > 0.0) p.add({static_cast<std::int64_t>(i + j)}, m);
    }
  }
  return p;
}

DistributionVector point_mass(std::vector<std::string> species, const State& state) {
  DistributionVector p(std::move(species));
  p.add(state, 1.0);
  return p;
}

}  // namespace mssr
