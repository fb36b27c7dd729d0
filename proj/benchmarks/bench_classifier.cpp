#include <benchmark/benchmark.h>

#include "phs/classifier.hpp"
#include "phs/oracle.hpp"

namespace {

void BM_Classify(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const phs::PHSystem s = phs::oracle::random_system(1, n, phs::oracle::ClassHint::general);
  for (auto _ : state) benchmark::DoNotOptimize(phs::classify(s));
}
BENCHMARK(BM_Classify)->Arg(1)->Arg(3)->Arg(6)->Arg(12);

void BM_ClassifyPolynomialField(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const phs::PHSystem s = phs::oracle::random_system(2, n, phs::oracle::ClassHint::contraction)
                              .with_h(phs::oracle::random_field(2, n, 1));
  for (auto _ : state) benchmark::DoNotOptimize(phs::classify(s));
}
BENCHMARK(BM_ClassifyPolynomialField)->Arg(2)->Arg(6);

void BM_Eigensplit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const phs::PHSystem s = phs::oracle::random_system(3, n, phs::oracle::ClassHint::general)
                              .with_h(phs::oracle::random_field(3, n, 1));
  for (auto _ : state) benchmark::DoNotOptimize(phs::eigensplit(s, 0.37));
}
BENCHMARK(BM_Eigensplit)->Arg(2)->Arg(6)->Arg(12);

void BM_OracleForm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const phs::PHSystem s = phs::oracle::random_system(4, n, phs::oracle::ClassHint::general);
  for (auto _ : state) benchmark::DoNotOptimize(phs::oracle::check_contraction_via_c(s));
}
BENCHMARK(BM_OracleForm)->Arg(3)->Arg(6);

}  // namespace
