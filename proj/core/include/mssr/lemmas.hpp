#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mssr/network.hpp"

namespace mssr {

struct LemmaCheck {
  std::string name;
  bool passed = false;
  std::string detail;
  std::map<std::string, double> measured;
};

struct LemmaReport {
  std::string network;
  std::vector<LemmaCheck> checks;

  bool all_passed() const;
};

struct LemmaOptions {
  double rho = 0.3;
  /// Intensity-gap bounds are checked at these N; (ii) fits its constant at fit_N.
  std::vector<std::int64_t> gap_grid{1000, 10000};
  std::int64_t fit_N = 100;
  std::size_t states = 10000;
  std::vector<double> jump_times{1.0, 10.0, 100.0};
  double jump_safety = 2.0;
  std::size_t jump_samples = 2000;
  std::vector<std::int64_t> exit_grid{100, 1000, 10000};
  double exit_T = 10.0;
  std::size_t exit_samples = 2000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

/// Intensity gaps on random states of S_M: (i) dominant reactions against s_k kappa_k lambda_L,
/// (ii) negligible reactions below c N^{-nu2}, (iii) total intensity against the reduced total.
LemmaReport intensity_gap_check(const ReactionNetwork& net, const LemmaOptions& options = {});
/// E(J(t)^2) <= safety * c max{1, t^2} on the projected system, c fitted at the first time.
LemmaReport jump_moment_check(const ReactionNetwork& net, const LemmaOptions& options = {});
/// Probability of leaving S_M before exit_T is nonincreasing in N (within two combined stderrs).
LemmaReport exit_probability_check(const ReactionNetwork& net, const LemmaOptions& options = {});

/// which: "all", "intensity-gap", "jump-moment" or "exit-probability".
LemmaReport lemma_harness(const ReactionNetwork& net, const std::string& which, const LemmaOptions& options = {});

}  // namespace mssr
