#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "convo/correlators.hpp"
#include "convo/gaussian.hpp"
#include "convo/interacting_measure.hpp"
#include "convo/interaction.hpp"

namespace {

using namespace convo;

InteractingMeasure diag2_instance() {
  return build_interacting_measure(
      GaussianMeasure::standard(2), GaussianMeasure::standard(1),
      InteractionMap::exponential(generator_preset("diag2")));
}

Functional coordinate(int dim, int k) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
  c[k] = 1.0;
  return Functional{c};
}

void bm_two_point_quadrature(benchmark::State& state) {
  const InteractingMeasure m = diag2_instance();
  const Functional f = coordinate(2, 0);
  const int nodes = static_cast<int>(state.range(0));
  for (auto _ : state) {
    CorrelatorEstimate est = two_point_quadrature(m, f, f, nodes);
    benchmark::DoNotOptimize(est.value);
  }
}
BENCHMARK(bm_two_point_quadrature)->Arg(20)->Arg(60)->Arg(120)
    ->Unit(benchmark::kMicrosecond);

void bm_two_point_perturbative(benchmark::State& state) {
  const InteractingMeasure m = diag2_instance();
  const Functional f = coordinate(2, 0);
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) {
    CorrelatorEstimate est = two_point_perturbative(m, f, f, order);
    benchmark::DoNotOptimize(est.value);
  }
}
BENCHMARK(bm_two_point_perturbative)->Arg(4)->Arg(8)->Arg(16)
    ->Unit(benchmark::kMicrosecond);

void bm_semi_analytic(benchmark::State& state) {
  const InteractingMeasure m = diag2_instance();
  const Functional f = coordinate(2, 0);
  const auto n = static_cast<std::int64_t>(state.range(0));
  for (auto _ : state) {
    CorrelatorEstimate est = semi_analytic_correlator(m, {f, f}, n, 9);
    benchmark::DoNotOptimize(est.value);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_semi_analytic)->Arg(1 << 12)->Arg(1 << 15)
    ->Unit(benchmark::kMillisecond);

void bm_mc_correlator(benchmark::State& state) {
  const InteractingMeasure m = diag2_instance();
  const Functional f = coordinate(2, 0);
  const auto n = static_cast<std::int64_t>(state.range(0));
  for (auto _ : state) {
    CorrelatorEstimate est = mc_correlator(m, {f, f}, n, 9);
    benchmark::DoNotOptimize(est.value);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_mc_correlator)->Arg(1 << 12)->Arg(1 << 15)
    ->Unit(benchmark::kMillisecond);

}  // namespace
