#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mssr/analysis.hpp"
#include "mssr/cme.hpp"
#include "mssr/error.hpp"
#include "mssr/lemmas.hpp"
#include "mssr/network.hpp"
#include "mssr/projection.hpp"
#include "mssr/report.hpp"
#include "mssr/scaling.hpp"
#include "mssr/ssa.hpp"

using nlohmann::json;
using namespace mssr;

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

json optional_rational(const std::optional<Rational>& r) {
  return r ? json(to_string(*r)) : json(nullptr);
}

json projected_json(const ProjectedSystem& proj) {
  json j;
  j["species"] = json::array();
  for (const auto& s : proj.species()) j["species"].push_back(s.name);
  j["reactions"] = json::array();
  for (const auto& r : proj.reactions()) {
    json provenance = json::array();
    for (const auto& p : r.provenance) provenance.push_back({{"id", p.id}, {"kappa", p.kappa}, {"s", p.s}});
    std::string law;
    for (const auto& f : r.low_law) law += (law.empty() ? "" : ";") + f.to_string();
    j["reactions"].push_back({{"id", r.id},
                              {"source", r.source.to_string()},
                              {"target", r.target.to_string()},
                              {"kappa_bar", r.kappa_bar},
                              {"low_law", law.empty() ? "1" : law},
                              {"provenance", provenance}});
  }
  j["dropped"] = proj.dropped();
  j["warnings"] = proj.warnings();
  return j;
}

int run_reduce(const std::string& path, std::int64_t N, double rho, const std::string& out_net) {
  const ScaledSystem sys(load_network(path), N);
  const auto& net = sys.network();
  const auto conditions = validate_conditions(sys);

  json j;
  j["network"] = path;
  j["N"] = N;
  j["theta0"] = to_string(sys.theta0());
  j["gamma"] = to_string(sys.gamma());
  j["rho"] = rho;
  j["M"] = std::pow(static_cast<double>(N), rho);
  const auto classes = classify_reactions(sys);
  j["dominant"] = classes.dominant;
  j["negligible"] = classes.negligible;

  j["reactions"] = json::array();
  j["conditions"] = json::array();
  for (std::size_t k = 0; k < net.reaction_count(); ++k) {
    json entry{{"id", net.reactions()[k].id}, {"order", optional_rational(sys.order(k))}, {"dominant", sys.is_dominant(k)}};
    try {
      entry["s"] = limit_factor(sys, k);
    } catch (const ConditionError&) {
      entry["s"] = nullptr;
    }
    j["reactions"].push_back(entry);
    const auto& c = conditions.reactions[k];
    j["conditions"].push_back(
        {{"id", c.id}, {"cd1", c.cd1}, {"cd2", c.cd2}, {"cd3", c.cd3}, {"failures", c.failures}, {"notes", c.notes}});
  }
  j["all_conditions_pass"] = conditions.all_pass();
  j["warnings"] = sys.warnings();

  int status = 0;
  try {
    const auto proj = build_projected_system(sys);
    j["projected"] = projected_json(proj);
    const auto text = serialize_network(proj.network());
    j["projected_network"] = text;
    if (!out_net.empty()) write_file(out_net, text);
  } catch (const ConditionError& e) {
    j["projected"] = nullptr;
    j["projected_network"] = nullptr;
    j["error"] = e.what();
    status = 1;
  }
  std::cout << j.dump(2) << "\n";
  return status;
}

struct SimulateArgs {
  std::string path;
  std::int64_t N = 1000;
  double T = 1.0;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  bool reduced = false;
  std::string record;
  std::optional<double> exit_rho;
  std::string csv;
  unsigned threads = 0;
  std::uint64_t max_jumps = 100'000'000;
};

int run_simulate(const SimulateArgs& a) {
  const auto net = load_network(a.path);
  SimulationConfig cfg;
  cfg.T = a.T;
  cfg.samples = a.samples;
  cfg.base_seed = a.seed;
  cfg.threads = a.threads;
  cfg.max_jumps = a.max_jumps;
  if (!a.record.empty()) cfg.record = split_list(a.record);

  TrajectoryEnsemble ens;
  json j;
  std::optional<ScaledSystem> sys;
  if (net.is_scale_free()) {
    ens = simulate_reduced(net, cfg);
    j["system"] = "scale-free";
  } else {
    sys.emplace(net, a.N);
    if (a.reduced) {
      const auto proj = build_projected_system(*sys);
      ens = simulate_reduced(proj, cfg);
      j["system"] = "reduced";
    } else {
      if (a.exit_rho) cfg.exit_M = std::pow(static_cast<double>(a.N), *a.exit_rho);
      ens = simulate_original(*sys, cfg);
      j["system"] = "original";
    }
  }

  j["network"] = a.path;
  j["N"] = a.N;
  j["T"] = a.T;
  j["samples"] = a.samples;
  j["seed"] = a.seed;
  j["species"] = ens.species;
  j["capped"] = ens.capped_count();
  const auto jumps = jump_moment_estimate(ens, 1);
  j["mean_jumps"] = jumps.value;
  if (cfg.exit_M) {
    std::size_t exits = 0, trials = 0;
    for (const auto& t : ens.trajectories) {
      if (t.capped) continue;
      ++trials;
      exits += t.exited ? 1 : 0;
    }
    const auto e = wilson_interval(exits, trials);
    j["exit"] = {{"M", *cfg.exit_M}, {"probability", e.p}, {"lower", e.lower}, {"upper", e.upper}};
  }

  std::string csv = "species,value,probability\n";
  json histograms = json::object();
  json means = json::object();
  for (std::size_t c = 0; c < ens.species.size(); ++c) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& t : ens.trajectories) {
      if (t.capped) continue;
      sum += t.observed[c];
      ++n;
    }
    means[ens.species[c]] = n ? sum / static_cast<double>(n) : 0.0;
    if (!ens.low[c]) continue;
    const auto dist = empirical_distribution(ens, {ens.species[c]});
    json h = json::object();
    for (const auto& [state, mass] : dist.masses()) {
      h[std::to_string(state[0])] = mass;
      csv += ens.species[c] + "," + std::to_string(state[0]) + "," + format_decimal(mass) + "\n";
    }
    histograms[ens.species[c]] = h;
  }
  j["means"] = means;
  j["histograms"] = histograms;
  if (!a.csv.empty()) write_file(a.csv, csv);
  std::cout << j.dump(2) << "\n";
  return 0;
}

State parse_init(const ReactionNetwork& net, const std::string& text) {
  State x;
  for (const auto& s : net.species()) x.push_back(static_cast<std::int64_t>(std::llround(s.z0)));
  for (const auto& item : split_list(text)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--init expects NAME=COUNT pairs");
    const auto i = net.species_index(item.substr(0, eq));
    x[i] = std::stoll(item.substr(eq + 1));
  }
  return x;
}

struct CmeArgs {
  std::string path;
  double T = 0.0;
  std::optional<std::int64_t> box;
  bool auto_slice = false;
  std::string init;
  bool stationary = false;
  std::string cert;
  double leak_tolerance = 1e-6;
};

int run_cme(const CmeArgs& a) {
  const auto net = load_network(a.path);
  if (!net.is_scale_free()) {
    throw ValidationError("cme needs a reduced (scale-free) network; produce one with `mssr reduce --out-net`");
  }
  TruncationOptions options;
  options.box = a.box;
  options.prefer_slice = a.auto_slice || !a.box;
  const auto initial = parse_init(net, a.init);
  auto gen = build_generator(net, enumerate_states(net, initial, options));

  json cert;
  cert["truncation"] = gen.states().describe();
  cert["states"] = gen.states().size();
  DistributionVector p;
  if (a.stationary) {
    auto result = stationary_solve(gen);
    p = std::move(result.pi);
    cert["mode"] = "stationary";
    cert["method"] = result.method;
    cert["residual"] = result.residual;
    cert["leaked_mass"] = result.boundary_flux;
  } else {
    TransientOptions topt;
    topt.leak_tolerance = a.leak_tolerance;
    auto result = transient_solve(gen, point_mass(gen.states().species(), initial), a.T, topt);
    p = std::move(result.p);
    cert["mode"] = "transient";
    cert["t"] = a.T;
    cert["leaked_mass"] = result.leaked;
    cert["residual"] = nullptr;
  }

  std::string header;
  for (const auto& s : p.species()) header += s + ",";
  std::cout << header << "probability\n";
  for (const auto& [state, mass] : p.masses()) {
    for (auto v : state) std::cout << v << ",";
    std::cout << format_decimal(mass) << "\n";
  }
  const auto text = cert.dump(2) + "\n";
  if (a.cert.empty()) std::cerr << text;
  else write_file(a.cert, text);
  return 0;
}

struct ConvergeArgs {
  std::string path;
  std::string event;
  double t = 1.0;
  std::string grid;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  std::string out;
  std::string csv;
  unsigned threads = 0;
  bool substitute_reduced = false;
};

int run_converge(const ConvergeArgs& a) {
  const auto net = load_network(a.path);
  SweepOptions options;
  options.event = EventSet::parse(a.event);
  options.t = a.t;
  for (const auto& item : split_list(a.grid)) options.grid.push_back(std::stoll(item));
  options.samples = a.samples;
  options.seed = a.seed;
  options.threads = a.threads;
  options.label = a.path;
  options.substitute_reduced = a.substitute_reduced;
  const auto report = convergence_sweep(net, options);
  if (!a.out.empty()) emit_report(report, ReportFormat::Json, a.out);
  if (!a.csv.empty()) emit_report(report, ReportFormat::Csv, a.csv);
  std::cout << to_json(report);
  return 0;
}

int run_lemmas(const std::string& path, const std::string& which, const LemmaOptions& options, const std::string& out) {
  auto report = lemma_harness(load_network(path), which, options);
  report.network = path;
  const auto text = to_json(report);
  if (!out.empty()) write_file(out, text);
  std::cout << text;
  return report.all_passed() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiscale stochastic reaction network reduction, simulation and verification"};
  app.require_subcommand(1);

  std::string path;
  std::int64_t N = 1000;
  double rho = 0.3;
  std::string out_net;
  auto* reduce = app.add_subcommand("reduce", "Classify reactions and build the projected low-copy system");
  reduce->add_option("network", path, "Network file")->required()->check(CLI::ExistingFile);
  reduce->add_option("--N", N, "Scaling parameter")->check(CLI::PositiveNumber);
  reduce->add_option("--rho", rho, "Exponent of M = N^rho");
  reduce->add_option("--out-net", out_net, "Write the projected network file here");

  SimulateArgs sim;
  std::optional<double> exit_rho;
  auto* simulate = app.add_subcommand("simulate", "Gillespie ensemble of the original or reduced system");
  simulate->add_option("network", sim.path, "Network file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--N", sim.N, "Scaling parameter")->check(CLI::PositiveNumber);
  simulate->add_option("--T", sim.T, "Horizon in reduced time")->required();
  simulate->add_option("--samples", sim.samples, "Number of trajectories")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "Base seed");
  simulate->add_flag("--reduced", sim.reduced, "Simulate the projected system");
  simulate->add_option("--record", sim.record, "Comma-separated species to observe");
  simulate->add_option("--exit-rho", exit_rho, "Monitor exits from S_M with M = N^rho");
  simulate->add_option("--csv", sim.csv, "Write histograms as CSV");
  simulate->add_option("--threads", sim.threads, "Worker threads (0: all cores)");
  simulate->add_option("--max-jumps", sim.max_jumps, "Per-trajectory jump cap");

  CmeArgs cme;
  std::optional<std::int64_t> box;
  auto* cme_cmd = app.add_subcommand("cme", "Solve the master equation of a reduced network");
  cme_cmd->add_option("network", cme.path, "Scale-free network file")->required()->check(CLI::ExistingFile);
  cme_cmd->add_option("--T", cme.T, "Time");
  auto* box_opt = cme_cmd->add_option("--box", box, "Box truncation bound M");
  auto* slice_opt = cme_cmd->add_flag("--auto-slice", cme.auto_slice, "Use a conservation slice when one exists");
  box_opt->excludes(slice_opt);
  cme_cmd->add_option("--init", cme.init, "Initial counts, e.g. \"S1=2,S4=1\" (default: z0)");
  cme_cmd->add_flag("--stationary", cme.stationary, "Solve for the stationary distribution");
  cme_cmd->add_option("--cert", cme.cert, "Write the certificate JSON here instead of stderr");
  cme_cmd->add_option("--leak-tol", cme.leak_tolerance, "Maximum leaked mass");

  ConvergeArgs conv;
  auto* converge = app.add_subcommand("converge", "Convergence sweep d(N) and slope fit");
  converge->add_option("network", conv.path, "Network file")->required()->check(CLI::ExistingFile);
  converge->add_option("--event", conv.event, "Event on low-copy species, e.g. \"S1 in {3,4}\"")->required();
  converge->add_option("--t", conv.t, "Observation time")->required();
  converge->add_option("--grid", conv.grid, "Comma-separated N values")->required();
  converge->add_option("--samples", conv.samples, "Trajectories per N")->check(CLI::PositiveNumber);
  converge->add_option("--seed", conv.seed, "Base seed");
  converge->add_option("--out", conv.out, "Write the JSON report here");
  converge->add_option("--csv", conv.csv, "Write N,d,stderr CSV here");
  converge->add_option("--threads", conv.threads, "Worker threads (0: all cores)");
  converge->add_flag("--substitute-reduced", conv.substitute_reduced, "Simulate the reduced system at every N");

  std::string lemma_path, which = "all", lemma_out;
  LemmaOptions lemma;
  auto* lemmas = app.add_subcommand("lemmas", "Property checks of the intensity-gap, jump-moment and exit bounds");
  lemmas->add_option("network", lemma_path, "Network file")->required()->check(CLI::ExistingFile);
  lemmas->add_option("--which", which, "all|intensity-gap|jump-moment|exit-probability")
      ->check(CLI::IsMember({"all", "intensity-gap", "jump-moment", "exit-probability"}));
  lemmas->add_option("--rho", lemma.rho, "Exponent of M = N^rho");
  lemmas->add_option("--states", lemma.states, "Random S_M states per N");
  lemmas->add_option("--samples", lemma.jump_samples, "Trajectories per jump-moment time");
  lemmas->add_option("--exit-samples", lemma.exit_samples, "Trajectories per N for exit probabilities");
  lemmas->add_option("--seed", lemma.seed, "Base seed");
  lemmas->add_option("--threads", lemma.threads, "Worker threads (0: all cores)");
  lemmas->add_option("--out", lemma_out, "Write the JSON report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*reduce) return run_reduce(path, N, rho, out_net);
    if (*simulate) {
      sim.exit_rho = exit_rho;
      return run_simulate(sim);
    }
    if (*cme_cmd) {
      cme.box = box;
      return run_cme(cme);
    }
    if (*converge) return run_converge(conv);
    if (*lemmas) return run_lemmas(lemma_path, which, lemma, lemma_out);
  } catch (const std::exception& e) {
    std::cerr << "mssr: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
