// Serial vs OpenMP remainder sweeps.
//   ASYMGREEN_THREADS=4 ./bench_sweep

#include <benchmark/benchmark.h>

#include <numbers>

#include "asymgreen/parallel.hpp"
#include "asymgreen/remainder.hpp"

using namespace asymgreen;

namespace {

const Ray kRay{Ray::Kind::Sector, std::numbers::pi / 4};

RemainderOptions options() {
  RemainderOptions opt;
  opt.reference = Reference::Oracle;
  return opt;
}

void BM_SweepSerial(benchmark::State& state) {
  const PotentialSpec spec = builtin("ex4");
  const auto moduli = linear_moduli(4, 40, static_cast<int>(state.range(0)));
  const RemainderOptions opt = options();
  for (auto _ : state) benchmark::DoNotOptimize(remainder_report_serial(spec, 0.5, 0, 4, kRay, moduli, opt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepOpenMP(benchmark::State& state) {
  const PotentialSpec spec = builtin("ex4");
  const auto moduli = linear_moduli(4, 40, static_cast<int>(state.range(0)));
  const RemainderOptions opt = options();
  for (auto _ : state) benchmark::DoNotOptimize(remainder_report(spec, 0.5, 0, 4, kRay, moduli, opt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = resolve_threads(opt.threads);
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepOpenMP)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
