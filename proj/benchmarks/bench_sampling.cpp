#include <benchmark/benchmark.h>

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

void bm_sample_interacting(benchmark::State& state) {
  const InteractingMeasure m = diag2_instance();
  const auto n = static_cast<std::int64_t>(state.range(0));
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    SampleBatch batch = sample_interacting(m, n, 42, threads);
    benchmark::DoNotOptimize(batch.values.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_sample_interacting)
    ->ArgsProduct({{1 << 12, 1 << 15}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond);

void bm_gaussian_sample(benchmark::State& state) {
  const GaussianMeasure mu = GaussianMeasure::standard(4);
  const auto n = static_cast<std::int64_t>(state.range(0));
  for (auto _ : state) {
    SampleBatch batch = sample(mu, n, 42, 0);
    benchmark::DoNotOptimize(batch.values.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_gaussian_sample)->Arg(1 << 12)->Arg(1 << 16)
    ->Unit(benchmark::kMillisecond);

void bm_partition_check(benchmark::State& state) {
  const InteractingMeasure m = diag2_instance();
  const auto probes = static_cast<std::int64_t>(state.range(0));
  for (auto _ : state) {
    PartitionReport report = partition_identity_check(m, probes, 7);
    benchmark::DoNotOptimize(report.max_abs_deviation);
  }
  state.SetItemsProcessed(state.iterations() * probes);
}
BENCHMARK(bm_partition_check)->Arg(100)->Arg(1000)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
