// Serial reference kernels against their OpenMP counterparts.

#include "mmd/kernels.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace mmd;

const MeasureModel& bern() {
  static const MeasureModel mu = MeasureModel::bernoulli(std::vector<double>{0.7, 0.3});
  return mu;
}

void BM_FilteredPrefixSerial(benchmark::State& st) {
  const auto sys = ShiftSystem::full(2);
  const kernels::MarginalFilter f(bern(), 2, 0.1);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::filtered_prefix_count_serial(sys, f, int(st.range(0)), 1));
}
void BM_FilteredPrefixOmp(benchmark::State& st) {
  const auto sys = ShiftSystem::full(2);
  const kernels::MarginalFilter f(bern(), 2, 0.1);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::filtered_prefix_count_omp(sys, f, int(st.range(0)), 1));
}
BENCHMARK(BM_FilteredPrefixSerial)->Arg(14)->Arg(18);
BENCHMARK(BM_FilteredPrefixOmp)->Arg(14)->Arg(18);

void BM_GenericWordsSerial(benchmark::State& st) {
  const auto sys = ShiftSystem::full(2);
  const kernels::MarginalFilter f(bern(), 2, 0.1);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::generic_words_serial(sys, f, int(st.range(0)), 10).size());
}
void BM_GenericWordsOmp(benchmark::State& st) {
  const auto sys = ShiftSystem::full(2);
  const kernels::MarginalFilter f(bern(), 2, 0.1);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::generic_words_omp(sys, f, int(st.range(0)), 10).size());
}
BENCHMARK(BM_GenericWordsSerial)->Arg(16)->Arg(20);
BENCHMARK(BM_GenericWordsOmp)->Arg(16)->Arg(20);

void BM_ReturnTimesSerial(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::return_times_serial(bern(), int(st.range(0)), 1, 1 << 16, 256, 7).size());
}
void BM_ReturnTimesOmp(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::return_times_omp(bern(), int(st.range(0)), 1, 1 << 16, 256, 7).size());
}
BENCHMARK(BM_ReturnTimesSerial)->Arg(8)->Arg(12);
BENCHMARK(BM_ReturnTimesOmp)->Arg(8)->Arg(12);

void BM_LocalExponentsSerial(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::local_exponents_serial(bern(), {64, 256, 1024}, 1, int(st.range(0)), 3).size());
}
void BM_LocalExponentsOmp(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::local_exponents_omp(bern(), {64, 256, 1024}, 1, int(st.range(0)), 3).size());
}
BENCHMARK(BM_LocalExponentsSerial)->Arg(512);
BENCHMARK(BM_LocalExponentsOmp)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
