#include <benchmark/benchmark.h>

#include <map>

#include "chest/chest.hpp"

using namespace chest;

namespace {

const Environment& env_for(int n_rx) {
  static std::map<int, Environment> cache;
  auto it = cache.find(n_rx);
  if (it == cache.end()) {
    SystemConfig sys;
    sys.n_rx = n_rx;
    it = cache.emplace(n_rx, build_environment(validate_config(sys, {}, {}))).first;
  }
  return it->second;
}

void BM_Projection(benchmark::State& state) {
  const Environment& env = env_for(static_cast<int>(state.range(0)));
  Rng rng = make_stream(1, 0, 0, StreamPurpose::validation);
  const CMatrix h = draw_circular_gaussian(env.bundle.system.n_rx, env.bundle.system.n_pilots, rng);
  for (auto _ : state) benchmark::DoNotOptimize(apply_projectors(env.twin, h));
}
BENCHMARK(BM_Projection)->Arg(16)->Arg(64);

void BM_Denoise(benchmark::State& state) {
  const Environment& env = env_for(static_cast<int>(state.range(0)));
  Rng rng = make_stream(1, 0, 0, StreamPurpose::validation);
  const ChannelEstimate ls{draw_circular_gaussian(env.bundle.system.n_rx, 32, rng), Grid::pilot,
                           Method::ls};
  for (auto _ : state) {
    benchmark::DoNotOptimize(denoise_estimate(ls, env.bundle.estimator.tau_max,
                                              env.bundle.sample_interval));
  }
}
BENCHMARK(BM_Denoise)->Arg(16)->Arg(64);

void BM_BmlSubspace(benchmark::State& state) {
  const int n_batch = static_cast<int>(state.range(0));
  Rng rng = make_stream(1, 0, 0, StreamPurpose::validation);
  const CMatrix stacked = draw_circular_gaussian(16, 32 * n_batch, rng);
  for (auto _ : state) benchmark::DoNotOptimize(bml_subspace_stacked(stacked, n_batch, 5, 5));
}
BENCHMARK(BM_BmlSubspace)->Arg(16)->Arg(64)->Arg(256);

void BM_Covariance(benchmark::State& state) {
  const Environment& env = env_for(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(channel_covariance(env.paths, env.steering, env.freq_pilots));
  }
}
BENCHMARK(BM_Covariance)->Arg(16)->Arg(64);

void BM_AnalyticNmse(benchmark::State& state) {
  const Environment& env = env_for(static_cast<int>(state.range(0)));
  const double s2 = env.noise_variance(0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(analytic_nmse(env.twin, env.covariance, 0.0, 1.0, s2));
  }
}
BENCHMARK(BM_AnalyticNmse)->Arg(16)->Arg(64);

// Whole-pipeline throughput: trials per second of a one-point NMSE sweep.
void BM_TrialThroughput(benchmark::State& state) {
  SystemConfig sys;
  sys.n_rx = 16;
  sys.n_trials = 20;
  sys.snr_grid = {0.0};
  const auto plan = make_plan(ExperimentKind::nmse_sweep, validate_config(sys, {}, {}), Scale::desk);
  for (auto _ : state) benchmark::DoNotOptimize(run_nmse_sweep(plan));
  state.SetItemsProcessed(state.iterations() * sys.n_trials);
}
BENCHMARK(BM_TrialThroughput)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
