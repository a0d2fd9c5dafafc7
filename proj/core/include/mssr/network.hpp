#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mssr/rational.hpp"

namespace mssr {

/// A chemical species with its abundance exponent alpha and scaled initial value z0.
/// The raw initial count is N^alpha * z0. Species with alpha == 0 are low-copy.
struct Species {
  std::string name;
  Rational alpha{0};
  double z0 = 0.0;

  bool is_low() const { return alpha.numerator() == 0; }

  friend bool operator==(const Species&, const Species&) = default;
};

/// Nonnegative integer combination of species. Zero coefficients are never stored,
/// so the empty map is the zero complex.
class Complex {
 public:
  Complex() = default;
  explicit Complex(std::map<std::string, int> terms);

  int coefficient(std::string_view species) const;
  void add(const std::string& species, int coefficient);
  bool empty() const { return terms_.empty(); }
  const std::map<std::string, int>& terms() const { return terms_; }

  /// Sum of coefficients (molecularity).
  int order() const;
  /// "0" for the empty complex, otherwise e.g. "A + 2 B".
  std::string to_string() const;

  friend bool operator==(const Complex&, const Complex&) = default;
  friend auto operator<=>(const Complex&, const Complex&) = default;

 private:
  std::map<std::string, int> terms_;
};

Complex operator+(const Complex& lhs, const Complex& rhs);

enum class FactorKind { FallingFactorial, Power, Hill, Sqrt, Log1pProduct };

std::string_view to_string(FactorKind kind);

/// One multiplicative term of a rate law.
///   FallingFactorial  x (x-1) ... (x-degree+1)
///   Power             x^degree
///   Hill              x / (x + c)
///   Sqrt              sqrt(x)
///   Log1pProduct      log(1 + x_1 x_2 ...)
/// All kinds are nonnegative and nondecreasing on nonnegative arguments.
struct Factor {
  FactorKind kind = FactorKind::FallingFactorial;
  std::vector<std::string> species;
  int degree = 1;
  double c = 0.0;

  double evaluate(std::span<const double> values) const;
  std::string to_string() const;

  friend bool operator==(const Factor&, const Factor&) = default;
  friend auto operator<=>(const Factor&, const Factor&) = default;
};

struct RateLaw {
  double kappa = 0.0;
  Rational beta{0};
  std::vector<Factor> factors;
  /// False when the file omitted `law=` and the factors are the mass-action default.
  bool explicit_law = false;

  friend bool operator==(const RateLaw&, const RateLaw&) = default;
};

/// Mass-action factors for a source complex: one falling factorial per reactant.
std::vector<Factor> mass_action_factors(const Complex& source);

struct Reaction {
  std::string id;
  Complex source;
  Complex target;
  RateLaw law;

  friend bool operator==(const Reaction&, const Reaction&) = default;
};

/// Validated, immutable reaction network. Species are stored in canonical order:
/// low-copy (alpha == 0) species first, then high-copy, each block sorted by name.
/// Reactions keep their declaration order.
class ReactionNetwork {
 public:
  ReactionNetwork() = default;
  /// Validates and canonicalizes; throws ValidationError.
  ReactionNetwork(std::vector<Species> species, std::vector<Reaction> reactions);

  const std::vector<Species>& species() const { return species_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }
  std::size_t species_count() const { return species_.size(); }
  std::size_t reaction_count() const { return reactions_.size(); }
  /// Number of low-copy species; they occupy indices [0, low_count()).
  std::size_t low_count() const { return low_count_; }

  std::optional<std::size_t> find_species(std::string_view name) const;
  std::optional<std::size_t> find_reaction(std::string_view id) const;
  /// Throws std::out_of_range for unknown names / ids.
  std::size_t species_index(std::string_view name) const;
  std::size_t reaction_index(std::string_view id) const;

  /// Net change y' - y of reaction k, indexed like species().
  const std::vector<std::int64_t>& stoichiometry(std::size_t k) const { return stoichiometry_[k]; }

  /// True when every alpha and beta is zero (a projected / scale-free network).
  bool is_scale_free() const;

  /// Raw initial counts N^alpha * z0, rounded to the nearest integer.
  std::vector<std::int64_t> initial_counts(std::int64_t N) const;

  /// kappa_k times the rate-law factors at raw values x (no N^beta factor); 0 when x
  /// lacks the reactants of the source complex.
  double propensity(std::size_t k, std::span<const double> x) const;

  friend bool operator==(const ReactionNetwork& a, const ReactionNetwork& b) {
    return a.species_ == b.species_ && a.reactions_ == b.reactions_;
  }

 private:
  struct CompiledFactor {
    FactorKind kind;
    std::vector<std::size_t> species;
    int degree;
    double c;
  };

  std::vector<Species> species_;
  std::vector<Reaction> reactions_;
  std::size_t low_count_ = 0;
  std::unordered_map<std::string, std::size_t> species_lookup_;
  std::unordered_map<std::string, std::size_t> reaction_lookup_;
  std::vector<std::vector<std::int64_t>> stoichiometry_;
  std::vector<std::vector<CompiledFactor>> compiled_;
  std::vector<std::vector<std::pair<std::size_t, int>>> reactants_;
};

/// Unscaled intensity lambda_k(x) of reaction `id` at integer counts x (one per species).
/// Throws std::out_of_range for an unknown id.
double evaluate_intensity(const ReactionNetwork& net, std::string_view id, std::span<const std::int64_t> x);

/// Integer basis of { w : w . (y'_k - y_k) = 0 for all k }, each vector primitive with
/// a positive leading entry. Ordering follows the free columns of the reduced row echelon form.
std::vector<std::vector<std::int64_t>> conservation_laws(const ReactionNetwork& net);

/// Parses the line-oriented network format. Throws ParseError (with line/column).
ReactionNetwork parse_network(std::string_view text);
ReactionNetwork load_network(const std::string& path);

/// Canonical text form; parse_network(serialize_network(n)) == n.
std::string serialize_network(const ReactionNetwork& net);

}  // namespace mssr
