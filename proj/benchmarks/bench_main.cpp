#include <cmath>

#include <benchmark/benchmark.h>

#include "hcv/decompose.hpp"
#include "hcv/disks.hpp"
#include "hcv/fit.hpp"
#include "hcv/partition.hpp"

namespace {

using namespace hcv;

const ComplexSequence& squares() {
  static const ComplexSequence s = ComplexSequence::polynomial({0.0, 0.0, 1.0});
  return s;
}

ConstantsBundle bundle(double thetaT) { return ConstantsBundle::derive({0.99, 1.01, 0.0, thetaT}, 2.001, 2.001, 0.999, 0.95); }

void BM_ThetaPartition(benchmark::State& state) {
  const auto c = bundle(0.25);
  const Index m = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(build_theta_partition(squares(), c, m).thetas.size());
}
BENCHMARK(BM_ThetaPartition)->Arg(66)->Arg(500)->Arg(2000);

void BM_SectorPartition(benchmark::State& state) {
  const auto c = bundle(static_cast<double>(state.range(0)) / 1000.0);
  for (auto _ : state) benchmark::DoNotOptimize(build_sector_partition(squares(), c, 66).points.size());
}
BENCHMARK(BM_SectorPartition)->Arg(10)->Arg(20)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_CheckDisjoint(benchmark::State& state) {
  const auto c = bundle(static_cast<double>(state.range(0)) / 1000.0);
  auto sp = build_sector_partition(squares(), c, 66);
  const auto fam = build_family(sp, squares());
  for (auto _ : state) benchmark::DoNotOptimize(check_disjoint(fam, 0).min_distance);
  state.counters["disks"] = static_cast<double>(fam.disks.size());
}
BENCHMARK(BM_CheckDisjoint)->Arg(20)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_Fit(benchmark::State& state) {
  std::vector<Complex> centers;
  std::vector<double> radii;
  for (int i = 0; i < state.range(0); ++i) {
    centers.emplace_back(3.0 * i, 0.0);
    radii.push_back(1.0);
  }
  const auto targets =
      sample_targets(centers, radii, [](std::size_t d, Complex z) { return d % 2 ? std::exp(z - Complex(3.0 * d)) : z; });
  FitOptions opt;
  opt.degree_schedule = {8, 16, 32};
  for (auto _ : state) benchmark::DoNotOptimize(fit_polynomial(targets, opt).global_sup_error);
}
BENCHMARK(BM_Fit)->Arg(1)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_Decompose(benchmark::State& state) {
  for (auto _ : state) {
    Index acc = 0;
    for (Index n = 11; n <= 100'000; ++n) acc += decompose_lemma81(n).j;
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_Decompose)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
