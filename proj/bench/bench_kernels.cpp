// Serial reference kernels against their OpenMP versions. Thread count comes
// from OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "prd/analysis/gradient_variance.hpp"
#include "prd/core/rng.hpp"
#include "prd/core/rollout.hpp"
#include "prd/kernels/advantage_kernels.hpp"
#include "prd/kernels/variance_kernels.hpp"
#include "prd/trainer/trainer.hpp"

using namespace prd;

namespace {

Episode bench_episode(int m) {
  envs::EnvSpec spec = envs::make_env_spec(envs::Family::kPaired, m, 1);
  const envs::Environment env(spec);
  const nets::ActorNetwork actor({m, kNumActions, {64, 64}}, 2);
  const nets::AttentionCritic critic({m, kNumActions, 64, 64}, 3);
  return rollout(env, actor, &critic, {m, spec.horizon, 0.99, 0}, 4);
}

Eigen::MatrixXd bench_samples(int rows, int cols) {
  CounterRng rng(5);
  Eigen::MatrixXd x(rows, cols);
  for (Eigen::Index k = 0; k < x.size(); ++k) x.data()[k] = rng.uniform(-1, 1);
  return x;
}

template <bool Parallel>
void BM_Advantages(benchmark::State& state) {
  const Episode ep = bench_episode(static_cast<int>(state.range(0)));
  const est::EstimatorConfig cfg;
  for (auto _ : state) {
    auto a = Parallel ? kernels::parallel::advantages(ep, kernels::AdvantageKind::kGae, cfg)
                      : kernels::serial::advantages(ep, kernels::AdvantageKind::kGae, cfg);
    benchmark::DoNotOptimize(a.data().data());
  }
}

template <bool Parallel>
void BM_TdTargets(benchmark::State& state) {
  const Episode ep = bench_episode(static_cast<int>(state.range(0)));
  const est::EstimatorConfig cfg;
  for (auto _ : state) {
    auto t = Parallel ? kernels::parallel::td_targets(ep, cfg) : kernels::serial::td_targets(ep, cfg);
    benchmark::DoNotOptimize(t.data().data());
  }
}

template <bool Parallel>
void BM_ColumnVariance(benchmark::State& state) {
  const Eigen::MatrixXd x = bench_samples(100, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Eigen::VectorXd v = Parallel ? kernels::parallel::column_variance(x) : kernels::serial::column_variance(x);
    benchmark::DoNotOptimize(v.data());
  }
}

template <bool Parallel>
void BM_SampleGradients(benchmark::State& state) {
  train::RunConfig cfg;
  cfg.env = envs::make_env_spec(envs::Family::kSyntheticDecoupled, 8, 1);
  cfg.env.horizon = 25;
  cfg.algorithm = algo::Algorithm::kSharedAcGae;
  const train::Models models = train::make_models(cfg);
  const envs::Environment env(cfg.env);
  analysis::VarianceOptions opts;
  opts.n_samples = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto s = Parallel ? analysis::parallel::sample_gradients(cfg, models, env, opts)
                      : analysis::serial::sample_gradients(cfg, models, env, opts);
    benchmark::DoNotOptimize(s.prd.data());
  }
}

}  // namespace

BENCHMARK(BM_Advantages<false>)->Arg(8)->Arg(30)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Advantages<true>)->Arg(8)->Arg(30)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TdTargets<false>)->Arg(8)->Arg(30)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TdTargets<true>)->Arg(8)->Arg(30)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ColumnVariance<false>)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ColumnVariance<true>)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SampleGradients<false>)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleGradients<true>)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
