// Microbenchmarks for the hot paths: the closed-form bound, the numeric
// correlation-space maximizations, the article-level tests, the simulation
// kernel, and the low-level special-function / RNG primitives.

#include <benchmark/benchmark.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <superlin/contrast.hpp>
#include <superlin/distributions.hpp>
#include <superlin/evidential.hpp>
#include <superlin/linearity.hpp>
#include <superlin/rng.hpp>
#include <superlin/simulate.hpp>
#include <superlin/types.hpp>

namespace {

using namespace superlin;

ExperimentSummary make_experiment(double z_tilde, int n) {
  ExperimentSummary e;
  e.id = "bench";
  e.sds = {1.0, 1.0, 1.0};
  e.cell_sizes = {n, n, n};
  const double z = z_tilde * std::sqrt(6.0 / n);
  e.means = {0.0, -z / 2.0, 0.0};
  return e;
}

ArticleDataset make_article(int n_experiments) {
  ArticleDataset a;
  a.id = "bench";
  for (int j = 0; j < n_experiments; ++j) {
    ExperimentSummary e = make_experiment(0.2 + 0.05 * j, 20);
    e.id = "e" + std::to_string(j);
    a.experiments.push_back(e);
  }
  return a;
}

void BM_v_hat_single(benchmark::State& state) {
  double zt = 0.204124;
  for (auto _ : state) {
    benchmark::DoNotOptimize(v_hat_single(zt).log_value);
  }
}
BENCHMARK(BM_v_hat_single);

void BM_v_single_numeric(benchmark::State& state) {
  const ExperimentSummary e = make_experiment(0.3, 20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(v_single_numeric(e).log_value);
  }
}
BENCHMARK(BM_v_single_numeric);

void BM_v_joint_numeric(benchmark::State& state) {
  const ArticleDataset a = make_article(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(v_joint_numeric(a).log_value);
  }
}
BENCHMARK(BM_v_joint_numeric);

void BM_chi2_article(benchmark::State& state) {
  const std::vector<double> zts = {0.1, -0.3, 0.2, 0.05, -0.15, 0.4, 0.0, 0.25};
  for (auto _ : state) {
    benchmark::DoNotOptimize(chi2_linearity_test(zts).p_value);
  }
}
BENCHMARK(BM_chi2_article);

void BM_delta_f_article(benchmark::State& state) {
  const ArticleDataset a = make_article(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(delta_f_article(a).p_value);
  }
}
BENCHMARK(BM_delta_f_article);

void BM_simulate_experiment(benchmark::State& state) {
  SimulationConfig cfg;
  cfg.seed = 42;
  std::uint64_t replicate = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_experiment(cfg, replicate++, 0));
  }
}
BENCHMARK(BM_simulate_experiment);

void BM_normal_quantile(benchmark::State& state) {
  double p = 0.025;
  for (auto _ : state) {
    benchmark::DoNotOptimize(normal_quantile(p));
  }
}
BENCHMARK(BM_normal_quantile);

void BM_philox_block(benchmark::State& state) {
  std::array<std::uint64_t, 2> key = {42, 7};
  std::array<std::uint64_t, 4> ctr = {0, 0, 0, 0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(Philox4x64::block(key, ctr));
    ++ctr[0];
  }
}
BENCHMARK(BM_philox_block);

}  // namespace

BENCHMARK_MAIN();
