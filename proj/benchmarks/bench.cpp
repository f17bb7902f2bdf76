#include <benchmark/benchmark.h>

#include "jcpath/analytic.hpp"
#include "jcpath/dispersive.hpp"
#include "jcpath/dynamics.hpp"
#include "jcpath/pipeline.hpp"

using namespace jcpath;

namespace {

SystemParams params_for(int n_max) {
  return SystemParams{1.06, 1.0, 1.0, 0.2, 0.2, n_max};
}

RabiScenario detuned_scenario() {
  RabiScenario s;
  s.theta = 0.6;
  s.phi = 0.3;
  s.n0 = 2;
  s.n1 = 1;
  s.g0 = 0.3;
  s.g1 = 0.35;
  s.delta0 = 0.09;
  s.delta1 = -0.1;
  s.omega0 = 1.0;
  s.omega1 = 1.19;
  s.t_m = 4.0;
  s.t = 11.0;
  return s;
}

void BM_controlled_propagator(benchmark::State& state) {
  SystemParams p = params_for(int(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(controlled_propagator(p, 0.0, 3.0));
}
BENCHMARK(BM_controlled_propagator)->Arg(8)->Arg(16)->Arg(28);

void BM_numeric_expm(benchmark::State& state) {
  SystemParams p = params_for(int(state.range(0)));
  OperatorMatrix h(free_hamiltonian(p).matrix() +
                   interaction_hamiltonian(p).matrix());
  for (auto _ : state) benchmark::DoNotOptimize(numeric_expm(h, 3.0));
}
BENCHMARK(BM_numeric_expm)->Arg(8)->Arg(12);

void BM_propagator_apply(benchmark::State& state) {
  const int n_max = int(state.range(0));
  SystemParams p = params_for(n_max);
  Propagator u = controlled_propagator(p, 0.0, 3.0);
  RabiScenario s = detuned_scenario();
  s.delta0 = s.delta1 = 0.06;
  s.omega0 = s.omega1 = 1.0;
  CompositeState psi = initial_rabi_state(s, n_max);
  for (auto _ : state) benchmark::DoNotOptimize(u.apply(psi));
}
BENCHMARK(BM_propagator_apply)->Arg(8)->Arg(28);

void BM_coherent_state(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(coherent_state(Complex(1.0745, 0.0), 28));
}
BENCHMARK(BM_coherent_state);

void BM_xi_coefficients(benchmark::State& state) {
  RabiScenario s = detuned_scenario();
  for (auto _ : state) benchmark::DoNotOptimize(xi_coefficients(s));
}
BENCHMARK(BM_xi_coefficients);

void BM_rabi_pipeline(benchmark::State& state) {
  RabiScenario s = detuned_scenario();
  const int n_max = rabi_safe_n_max(s);
  for (auto _ : state) benchmark::DoNotOptimize(simulated_inversion(s, n_max));
}
BENCHMARK(BM_rabi_pipeline);

void BM_double_cat_row(benchmark::State& state) {
  for (auto _ : state) {
    double acc = 0.0;
    for (int i = 0; i < 100; ++i)
      acc += double_cat_probability(2.25, 0.05 + 0.05 * i);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_double_cat_row);

}  // namespace

BENCHMARK_MAIN();
