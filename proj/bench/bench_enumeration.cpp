// Serial reference vs OpenMP kernels: active-set enumeration for the two
// direction oracles, and the hardness and basin sweeps.

#include <benchmark/benchmark.h>

#include <random>

#include "saddle_escape/hardness.hpp"
#include "saddle_escape/pgd.hpp"
#include "saddle_escape/subsolvers.hpp"

using namespace saddle;

namespace {

struct Instance {
  Matrix H;
  Vector g;
  Polytope P;
  Vector x;
};

// Random polytope with m rows in R^n, all active at x = 0 so that every
// subset is admissible.
Instance make_instance(int n, int m) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(1000 * n + m));
  std::normal_distribution<double> N;
  Matrix A(m, n), B(n, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = N(rng);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = N(rng);
  Vector g(n);
  for (int j = 0; j < n; ++j) g(j) = N(rng);
  return {0.5 * (B + B.transpose()), g, Polytope(A, Vector::Zero(m)), Vector::Zero(n)};
}

Execution mode(const benchmark::State& s) { return s.range(2) ? Execution::parallel : Execution::serial; }

void BM_Lmo(benchmark::State& state) {
  const Instance in = make_instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_lmo(in.g, in.P, in.x, mode(state)).value);
}

void BM_Qmo(benchmark::State& state) {
  const Instance in = make_instance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_qmo(in.H, in.g, in.P, in.x, mode(state)).value);
}

void BM_HardnessSweep(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(sweep_random(static_cast<int>(state.range(0)), 6, 8, 1, mode(state)).size());
}

void BM_BasinSweep(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        basin_sweep(0.05, 0.5, static_cast<int>(state.range(0)), 7, 200000, 1e-5, mode(state)).size());
}

void oracle_args(benchmark::internal::Benchmark* b) {
  for (int par : {0, 1})
    for (auto [n, m] : {std::pair{4, 4}, {6, 8}, {8, 12}}) b->Args({n, m, par});
  b->ArgNames({"n", "m", "parallel"})->Unit(benchmark::kMicrosecond);
}

}  // namespace

BENCHMARK(BM_Lmo)->Apply(oracle_args);
BENCHMARK(BM_Qmo)->Apply(oracle_args);
BENCHMARK(BM_HardnessSweep)->Args({20, 0, 0})->Args({20, 0, 1})->ArgNames({"graphs", "", "parallel"})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BasinSweep)->Args({200, 0, 0})->Args({200, 0, 1})->ArgNames({"starts", "", "parallel"})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
