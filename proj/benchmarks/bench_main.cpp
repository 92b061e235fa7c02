#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "wcalc/forms.hpp"
#include "wcalc/green.hpp"
#include "wcalc/library.hpp"
#include "wcalc/measure.hpp"
#include "wcalc/symplectic.hpp"
#include "wcalc/transport.hpp"

namespace {

using namespace wcalc;

DiscreteMeasure random_measure(std::mt19937& rng, int n, int d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec> atoms;
  for (int i = 0; i < n; ++i) {
    Vec x(d);
    for (int k = 0; k < d; ++k) x(k) = u(rng);
    atoms.push_back(x);
  }
  return DiscreteMeasure(atoms, std::vector<double>(static_cast<size_t>(n), 1.0 / n));
}

MeasureCurve circle_curve(int intervals) {
  std::vector<double> times;
  std::vector<DiscreteMeasure> measures;
  std::vector<TangentField> velocities;
  for (int k = 0; k <= intervals; ++k) {
    const double t = 2.0 * std::numbers::pi * k / intervals;
    times.push_back(t);
    Vec x(2);
    x << std::cos(t), std::sin(t);
    measures.push_back(dirac(x));
    Vec v(2);
    v << -std::sin(t), std::cos(t);
    TangentField f;
    f.vectors.push_back(v);
    velocities.push_back(f);
  }
  return MeasureCurve(times, measures, velocities);
}

void BM_OptimalPlan(benchmark::State& state) {
  std::mt19937 rng(42);
  const int n = static_cast<int>(state.range(0));
  const DiscreteMeasure mu = random_measure(rng, n, 2);
  const DiscreteMeasure nu = random_measure(rng, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(optimal_plan(mu, nu).cost());
}
BENCHMARK(BM_OptimalPlan)->Arg(8)->Arg(32)->Arg(128);

void BM_W2Distance(benchmark::State& state) {
  std::mt19937 rng(43);
  const int n = static_cast<int>(state.range(0));
  const DiscreteMeasure mu = random_measure(rng, n, 3);
  const DiscreteMeasure nu = random_measure(rng, n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(w2_distance(mu, nu));
}
BENCHMARK(BM_W2Distance)->Arg(16)->Arg(64);

void BM_LineIntegral(benchmark::State& state) {
  const MeasureCurve curve = circle_curve(static_cast<int>(state.range(0)));
  const PseudoOneForm form = form_by_name("swirl", 2);
  for (auto _ : state) benchmark::DoNotOptimize(line_integral(form, curve));
}
BENCHMARK(BM_LineIntegral)->Arg(256)->Arg(1024);

void BM_GreenResidual(benchmark::State& state) {
  const MeasureCurve curve = circle_curve(64);
  const AnnulusSurface surface = make_annulus(curve, 0.1, static_cast<int>(state.range(0)));
  const PseudoOneForm form = form_by_name("swirl", 2);
  for (auto _ : state) benchmark::DoNotOptimize(green_residual(form, surface));
}
BENCHMARK(BM_GreenResidual)->Arg(16)->Arg(32);

void BM_HamiltonianFlow(benchmark::State& state) {
  std::mt19937 rng(44);
  const HamiltonianSystem system = hamiltonian_by_name("interaction:gauss", 2);
  const DiscreteMeasure mu0 = random_measure(rng, static_cast<int>(state.range(0)), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        hamiltonian_flow(system, mu0, 1.0, 1e-2, FlowScheme::Rk4, {1e-10, 100}));
  }
}
BENCHMARK(BM_HamiltonianFlow)->Arg(4)->Arg(16);

void BM_ReconstructPotential(benchmark::State& state) {
  std::mt19937 rng(45);
  const PseudoOneForm form = exact_form(scalar_by_name("quartic", 2));
  const DiscreteMeasure mu = random_measure(rng, 4, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(reconstruct_potential(form, mu, static_cast<int>(state.range(0)),
                                                   /*assume_closed=*/true));
}
BENCHMARK(BM_ReconstructPotential)->Arg(512)->Arg(2048);

}  // namespace

BENCHMARK_MAIN();
