#include <benchmark/benchmark.h>

#include <cmath>

#include "phs/oracle.hpp"
#include "phs/simulator.hpp"

namespace {

void BM_SimulatorStep(benchmark::State& state) {
  const int n = 3;
  const phs::PHSystem s = phs::oracle::random_system(5, n, phs::oracle::ClassHint::contraction)
                              .with_h(phs::oracle::random_field(5, n, 1));
  phs::sim::SimConfig cfg;
  cfg.nx = static_cast<int>(state.range(0));
  cfg.t_final = 1e9;
  cfg.record_every = 1 << 30;
  const phs::sim::Simulator sim(s, cfg);
  phs::sim::SimState st = sim.initial_state(
      [](double z) { return phs::ComplexVector(phs::ComplexVector::Constant(n, std::sin(z))); });
  for (auto _ : state) st = sim.step(std::move(st));
  state.SetItemsProcessed(state.iterations() * (cfg.nx + 1));
}
BENCHMARK(BM_SimulatorStep)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
