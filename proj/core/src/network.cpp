#include "mssr/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "mssr/error.hpp"

namespace mssr {

Complex::Complex(std::map<std::string, int> terms) {
  for (auto& [name, coefficient] : terms) add(name, coefficient);
}

int Complex::coefficient(std::string_view species) const {
  auto it = terms_.find(std::string(species));
  return it == terms_.end() ? 0 : it->second;
}

void Complex::add(const std::string& species, int coefficient) {
  if (coefficient < 0) throw ValidationError("negative stoichiometric coefficient for " + species);
  if (coefficient == 0) return;
  terms_[species] += coefficient;
}

int Complex::order() const {
  int total = 0;
  for (const auto& [_, coefficient] : terms_) total += coefficient;
  return total;
}

std::string Complex::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [name, coefficient] : terms_) {
    if (!out.empty()) out += " + ";
    if (coefficient != 1) out += std::to_string(coefficient) + " ";
    out += name;
  }
  return out;
}

Complex operator+(const Complex& lhs, const Complex& rhs) {
  Complex sum = lhs;
  for (const auto& [name, coefficient] : rhs.terms()) sum.add(name, coefficient);
  return sum;
}

std::string_view to_string(FactorKind kind) {
  switch (kind) {
    case FactorKind::FallingFactorial: return "ff";
    case FactorKind::Power: return "pow";
    case FactorKind::Hill: return "hill";
    case FactorKind::Sqrt: return "sqrt";
    case FactorKind::Log1pProduct: return "log1p";
  }
  return "?";
}

namespace {

double falling_factorial(double x, int degree) {
  double value = 1.0;
  for (int j = 0; j < degree; ++j) {
    const double term = x - j;
    if (term <= 0.0) return 0.0;
    value *= term;
  }
  return value;
}

template <typename ValueAt>
double factor_value(FactorKind kind, int degree, double c, std::size_t arity, ValueAt&& value_at) {
  switch (kind) {
    case FactorKind::FallingFactorial:
      return falling_factorial(value_at(0), degree);
    case FactorKind::Power: {
      const double x = std::max(0.0, value_at(0));
      double value = 1.0;
      for (int j = 0; j < degree; ++j) value *= x;
      return value;
    }
    case FactorKind::Hill: {
      const double x = std::max(0.0, value_at(0));
      return x / (x + c);
    }
    case FactorKind::Sqrt:
      return std::sqrt(std::max(0.0, value_at(0)));
    case FactorKind::Log1pProduct: {
      double product = 1.0;
      for (std::size_t i = 0; i < arity; ++i) product *= std::max(0.0, value_at(i));
      return std::log1p(product);
    }
  }
  return 0.0;
}

}  // namespace

double Factor::evaluate(std::span<const double> values) const {
  if (values.size() != species.size()) throw std::invalid_argument("factor arity mismatch");
  return factor_value(kind, degree, c, values.size(), [&](std::size_t i) { return values[i]; });
}

std::string Factor::to_string() const {
  std::string out(mssr::to_string(kind));
  out += '(';
  switch (kind) {
    case FactorKind::FallingFactorial:
    case FactorKind::Power:
      out += species.front() + "," + std::to_string(degree);
      break;
    case FactorKind::Hill:
      out += species.front() + "," + format_decimal(c);
      break;
    case FactorKind::Sqrt:
      out += species.front();
      break;
    case FactorKind::Log1pProduct:
      for (std::size_t i = 0; i < species.size(); ++i) {
        if (i) out += '*';
        out += species[i];
      }
      break;
  }
  out += ')';
  return out;
}

std::vector<Factor> mass_action_factors(const Complex& source) {
  std::vector<Factor> factors;
  for (const auto& [name, coefficient] : source.terms()) {
    factors.push_back(Factor{FactorKind::FallingFactorial, {name}, coefficient, 0.0});
  }
  return factors;
}

ReactionNetwork::ReactionNetwork(std::vector<Species> species, std::vector<Reaction> reactions)
    : species_(std::move(species)), reactions_(std::move(reactions)) {
  std::stable_sort(species_.begin(), species_.end(), [](const Species& a, const Species& b) {
    if (a.is_low() != b.is_low()) return a.is_low();
    return a.name < b.name;
  });

  for (std::size_t i = 0; i < species_.size(); ++i) {
    const auto& s = species_[i];
    if (s.name.empty()) throw ValidationError("species with empty name");
    if (!species_lookup_.emplace(s.name, i).second) throw ValidationError("duplicate species '" + s.name + "'");
    if (s.alpha < 0) throw ValidationError("species '" + s.name + "' has negative alpha");
    if (!(s.z0 >= 0.0) || !std::isfinite(s.z0)) throw ValidationError("species '" + s.name + "' has negative z0");
    if (s.is_low() && s.z0 != std::floor(s.z0)) {
      throw ValidationError("low-copy species '" + s.name + "' needs an integer z0");
    }
    if (s.is_low()) ++low_count_;
  }

  auto require_declared = [&](const std::string& name, const std::string& where) {
    if (!species_lookup_.contains(name)) {
      throw ValidationError("reaction '" + where + "' references undeclared species '" + name + "'");
    }
  };

  for (std::size_t k = 0; k < reactions_.size(); ++k) {
    auto& r = reactions_[k];
    if (r.id.empty()) throw ValidationError("reaction with empty id");
    if (!reaction_lookup_.emplace(r.id, k).second) throw ValidationError("duplicate reaction id '" + r.id + "'");
    if (r.source == r.target) throw ValidationError("reaction '" + r.id + "' is a self-loop");
    if (!(r.law.kappa >= 0.0) || !std::isfinite(r.law.kappa)) {
      throw ValidationError("reaction '" + r.id + "' has a negative rate constant");
    }
    for (const auto& [name, _] : r.source.terms()) require_declared(name, r.id);
    for (const auto& [name, _] : r.target.terms()) require_declared(name, r.id);

    if (!r.law.explicit_law) r.law.factors = mass_action_factors(r.source);

    std::set<std::string> seen;
    std::vector<CompiledFactor> compiled;
    for (const auto& f : r.law.factors) {
      if (f.species.empty()) throw ValidationError("reaction '" + r.id + "' has a factor without species");
      if (f.kind != FactorKind::Log1pProduct && f.species.size() != 1) {
        throw ValidationError("reaction '" + r.id + "': only log1p takes several species");
      }
      if ((f.kind == FactorKind::FallingFactorial || f.kind == FactorKind::Power) && f.degree < 1) {
        throw ValidationError("reaction '" + r.id + "': factor degree must be >= 1");
      }
      if (f.kind == FactorKind::Hill && !(f.c > 0.0)) {
        throw ValidationError("reaction '" + r.id + "': hill constant must be positive");
      }
      CompiledFactor cf{f.kind, {}, f.degree, f.c};
      for (const auto& name : f.species) {
        require_declared(name, r.id);
        if (!seen.insert(name).second) {
          throw ValidationError("reaction '" + r.id + "': species '" + name + "' appears in more than one factor");
        }
        cf.species.push_back(species_lookup_.at(name));
      }
      compiled.push_back(std::move(cf));
    }
    compiled_.push_back(std::move(compiled));

    std::vector<std::pair<std::size_t, int>> reactants;
    for (const auto& [name, coefficient] : r.source.terms()) reactants.emplace_back(species_lookup_.at(name), coefficient);
    reactants_.push_back(std::move(reactants));

    std::vector<std::int64_t> change(species_.size(), 0);
    for (const auto& [name, coefficient] : r.target.terms()) change[species_lookup_.at(name)] += coefficient;
    for (const auto& [name, coefficient] : r.source.terms()) change[species_lookup_.at(name)] -= coefficient;
    stoichiometry_.push_back(std::move(change));
  }
}

std::optional<std::size_t> ReactionNetwork::find_species(std::string_view name) const {
  auto it = species_lookup_.find(std::string(name));
  if (it == species_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> ReactionNetwork::find_reaction(std::string_view id) const {
  auto it = reaction_lookup_.find(std::string(id));
  if (it == reaction_lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t ReactionNetwork::species_index(std::string_view name) const {
  if (auto i = find_species(name)) return *i;
  throw std::out_of_range("unknown species '" + std::string(name) + "'");
}

std::size_t ReactionNetwork::reaction_index(std::string_view id) const {
  if (auto k = find_reaction(id)) return *k;
  throw std::out_of_range("unknown reaction '" + std::string(id) + "'");
}

bool ReactionNetwork::is_scale_free() const {
  return std::all_of(species_.begin(), species_.end(), [](const Species& s) { return s.alpha.numerator() == 0; }) &&
         std::all_of(reactions_.begin(), reactions_.end(), [](const Reaction& r) { return r.law.beta.numerator() == 0; });
}

std::vector<std::int64_t> ReactionNetwork::initial_counts(std::int64_t N) const {
  std::vector<std::int64_t> counts;
  counts.reserve(species_.size());
  for (const auto& s : species_) {
    counts.push_back(static_cast<std::int64_t>(std::llround(power_of(N, s.alpha) * s.z0)));
  }
  return counts;
}

double ReactionNetwork::propensity(std::size_t k, std::span<const double> x) const {
  double value = reactions_[k].law.kappa;
  if (value == 0.0) return 0.0;
  for (const auto& [i, coefficient] : reactants_[k]) {
    if (x[i] < coefficient) return 0.0;
  }
  for (const auto& f : compiled_[k]) {
    value *= factor_value(f.kind, f.degree, f.c, f.species.size(), [&](std::size_t i) { return x[f.species[i]]; });
    if (value == 0.0) return 0.0;
  }
  return value;
}

double evaluate_intensity(const ReactionNetwork& net, std::string_view id, std::span<const std::int64_t> x) {
  const auto k = net.reaction_index(id);
  if (x.size() != net.species_count()) throw std::invalid_argument("state has the wrong number of species");
  std::vector<double> values(x.begin(), x.end());
  return net.propensity(k, values);
}

}  // namespace mssr
