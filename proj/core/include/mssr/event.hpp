#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mssr {

/// Conjunction of per-species constraints on low-copy counts, e.g. "S1 in {3,4} and S4 <= 2".
/// Clauses: `name in {v,...}`, `name in [a,b]`, `name <op> v` with op in == != < <= > >=.
/// Clauses are joined by "and" or "&"; the empty text is the whole space.
class EventSet {
 public:
  struct Clause {
    std::string species;
    std::set<std::int64_t> values;  // used when !range
    bool range = false;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    bool negate = false;  // for !=

    bool contains(std::int64_t v) const;
  };

  EventSet() = default;
  explicit EventSet(std::vector<Clause> clauses) : clauses_(std::move(clauses)) {}

  /// Throws std::invalid_argument on malformed text.
  static EventSet parse(std::string_view text);
  std::string to_string() const;

  const std::vector<Clause>& clauses() const { return clauses_; }
  std::vector<std::string> species() const;

  /// `names` labels the coordinates of `state`; every clause species must be among them.
  bool contains(const std::vector<std::string>& names, std::span<const std::int64_t> state) const;

  friend bool operator==(const EventSet& a, const EventSet& b) { return a.to_string() == b.to_string(); }

 private:
  std::vector<Clause> clauses_;
};

}  // namespace mssr
