#include <benchmark/benchmark.h>

#include "mssr/cme.hpp"
#include "mssr/projection.hpp"
#include "mssr/scaling.hpp"
#include "mssr/ssa.hpp"

using namespace mssr;

namespace {

ReactionNetwork bundled(const std::string& name) { return load_network(std::string(MSSR_NETWORK_DIR) + "/" + name); }

ProjectedSystem reduced_futile() {
  static const ScaledSystem sys(bundled("futile.net"), 1000);
  return build_projected_system(sys);
}

}  // namespace

static void BM_SsaFutile(benchmark::State& state) {
  const ScaledSystem sys(bundled("futile.net"), state.range(0));
  SimulationConfig cfg;
  cfg.T = 10.0;
  cfg.samples = 1000;
  cfg.threads = 1;
  std::uint64_t jumps = 0;
  for (auto _ : state) {
    const auto ens = simulate_original(sys, cfg);
    for (const auto& t : ens.trajectories) jumps += t.jumps;
    ++cfg.base_seed;
  }
  state.counters["jumps/s"] = benchmark::Counter(static_cast<double>(jumps), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SsaFutile)->Arg(100)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_Uniformization(benchmark::State& state) {
  const auto proj = reduced_futile();
  TruncationOptions opts;
  opts.box = state.range(0);
  const auto gen = build_generator(proj.network(), enumerate_states(proj.network(), proj.initial_state(), opts));
  const auto p0 = point_mass(gen.states().species(), proj.initial_state());
  for (auto _ : state) benchmark::DoNotOptimize(transient_solve(gen, p0, 100.0));
  state.counters["states"] = static_cast<double>(gen.states().size());
}
BENCHMARK(BM_Uniformization)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_Stationary(benchmark::State& state) {
  const auto proj = reduced_futile();
  TruncationOptions opts;
  opts.box = state.range(0);
  const auto gen = build_generator(proj.network(), enumerate_states(proj.network(), proj.initial_state(), opts));
  for (auto _ : state) benchmark::DoNotOptimize(stationary_solve(gen));
  state.counters["states"] = static_cast<double>(gen.states().size());
}
BENCHMARK(BM_Stationary)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
