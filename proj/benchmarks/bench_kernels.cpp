#include <benchmark/benchmark.h>

#include <vector>

#include "propphase/estimator.hpp"
#include "propphase/families.hpp"
#include "propphase/kernels.hpp"

using namespace propphase;

namespace {

FamilySpec family(FamilyKind kind, double null, double sigma = 1.0, int n = 1) {
  FamilySpec fam;
  fam.kind = kind;
  fam.null_param = null;
  fam.sigma = sigma;
  fam.n = n;
  return fam;
}

void BM_KernelI(benchmark::State& state) {
  const FamilySpec fam = family(FamilyKind::Laplace, 0.0);
  const KernelConfig cfg;
  const KernelEvaluator kernel(fam, cfg, 6.9);
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel(x));
    x += 0.01;
  }
}
BENCHMARK(BM_KernelI);

void BM_KernelII(benchmark::State& state) {
  const FamilySpec fam = family(FamilyKind::NegativeBinomial, -4.5, 1.0, 5);
  const KernelConfig cfg;
  const KernelEvaluator kernel(fam, cfg, 3.45);
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel(x));
  }
}
BENCHMARK(BM_KernelII)->Arg(0)->Arg(5)->Arg(20);

void BM_KernelIII(benchmark::State& state) {
  const FamilySpec fam = family(FamilyKind::Gamma, 0.5, 6.0);
  KernelConfig cfg;
  cfg.series_n = static_cast<int>(state.range(0));
  const KernelEvaluator kernel(fam, cfg, 1.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel(12.0));
  }
}
BENCHMARK(BM_KernelIII)->Arg(20)->Arg(60);

void BM_EmpiricalPhase(benchmark::State& state) {
  const FamilySpec fam = family(FamilyKind::Laplace, 0.0);
  const KernelConfig cfg;
  RandomStream rng(1);
  std::vector<double> z(state.range(0));
  for (auto& v : z) v = sample(fam, 0.0, rng);
  const double t = std::log(static_cast<double>(z.size()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(empirical_phase(z, t, fam, cfg).pi1_raw);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EmpiricalPhase)->Range(1000, 16000)->Complexity();

}  // namespace

BENCHMARK_MAIN();
