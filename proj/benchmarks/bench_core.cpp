#include <benchmark/benchmark.h>

#include <cmath>

#include "rsmboot/bandwidth.hpp"
#include "rsmboot/region_build.hpp"
#include "rsmboot/rng.hpp"
#include "rsmboot/sim.hpp"

using namespace rsmboot;

namespace {

const Region kBox = Region::square(1.4);

Experiment sample_experiment(std::uint64_t seed) {
  return simulate_experiment(TrueSystem::concave_down(), ccd_design(5, std::sqrt(2.0)), kBox,
                             3.0, seed);
}

DensityEstimate sample_density(int b, std::uint64_t seed) {
  const Experiment e = sample_experiment(seed);
  const FitResult f = fit(e);
  const BootstrapCloud cloud = bootstrap_xcm(f, e, b, derive_stream(seed, {kTagBoot}));
  const BandwidthSelection bw = select_bandwidths(cloud, kBox, BandwidthMethod::kRuleOfThumb,
                                                  derive_stream(seed, {kTagJitter}));
  return DensityEstimate::build(cloud, bw.h, kBox);
}

void BM_Fit13(benchmark::State& state) {
  const Experiment e = sample_experiment(1);
  for (auto _ : state) benchmark::DoNotOptimize(fit(e));
}
BENCHMARK(BM_Fit13);

void BM_ConstrainedMax(benchmark::State& state) {
  const FitResult f = fit(sample_experiment(2));
  for (auto _ : state) benchmark::DoNotOptimize(constrained_max(f.model, kBox));
}
BENCHMARK(BM_ConstrainedMax);

void BM_BootstrapXcm(benchmark::State& state) {
  const Experiment e = sample_experiment(3);
  const FitResult f = fit(e);
  const int b = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bootstrap_xcm(f, e, b, 19));
  state.SetItemsProcessed(state.iterations() * b);
}
BENCHMARK(BM_BootstrapXcm)->Arg(200)->Arg(500);

void BM_DensityAt(benchmark::State& state) {
  const DensityEstimate est = sample_density(static_cast<int>(state.range(0)), 4);
  const Eigen::Vector2d q{0.3, 0.4};
  for (auto _ : state) benchmark::DoNotOptimize(density_at(est, q));
}
BENCHMARK(BM_DensityAt)->Arg(500)->Arg(2000);

void BM_DensityGrid(benchmark::State& state) {
  const DensityEstimate est = sample_density(500, 5);
  const int res = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(density_on_grid(est, res));
}
BENCHMARK(BM_DensityGrid)->Arg(64)->Arg(128);

void BM_PluginBandwidth(benchmark::State& state) {
  const DensityEstimate est = sample_density(static_cast<int>(state.range(0)), 6);
  const Eigen::MatrixX2d pts = jittered_points(est.cloud, kBox, 77);
  const Eigen::Vector2d scales = jittered_scale(est.cloud, kBox, 77);
  for (auto _ : state) benchmark::DoNotOptimize(plugin_bandwidth(pts, scales));
}
BENCHMARK(BM_PluginBandwidth)->Arg(200)->Arg(1000);

void BM_ExtractContours(benchmark::State& state) {
  const DensityEstimate est = sample_density(500, 7);
  const DensityGrid grid = density_on_grid(est, static_cast<int>(state.range(0)));
  Eigen::VectorXd at_cloud(est.cloud.b());
  for (int i = 0; i < est.cloud.b(); ++i)
    at_cloud[i] = density_at(est, est.cloud.points.row(i));
  const double level = select_f_alpha(at_cloud, 0.10, est.cloud.b());
  for (auto _ : state) benchmark::DoNotOptimize(extract_contours(grid, level));
}
BENCHMARK(BM_ExtractContours)->Arg(128)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
