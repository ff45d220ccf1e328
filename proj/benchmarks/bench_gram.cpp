#include "depcon/clustering.hpp"
#include "depcon/kernel.hpp"
#include "depcon/synth.hpp"

#include <benchmark/benchmark.h>

namespace {

depcon::Dataset sample(std::size_t n, std::size_t m) {
    const auto dag = depcon::synth::random_dag(m, 0.3, 1);
    const auto sem = depcon::synth::random_linear_sem(dag, 2);
    return depcon::synth::sample_linear_sem(sem, n, 3);
}

void BM_GramMaterialized(benchmark::State& state) {
    const auto data = sample(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    depcon::GramOptions options;
    options.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(depcon::gram_matrix(data, options).values.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GramMaterialized)->Args({100, 10})->Args({300, 10})->Args({600, 10})->Args({300, 20})->Unit(benchmark::kMillisecond);

void BM_GramStreamed(benchmark::State& state) {
    const auto data = sample(static_cast<std::size_t>(state.range(0)), 10);
    depcon::GramOptions options;
    options.threads = 1;
    options.memory_budget_bytes = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(depcon::gram_matrix(data, options).values.data());
    }
}
BENCHMARK(BM_GramStreamed)->Arg(300)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_KernelKMeans(benchmark::State& state) {
    const auto data = sample(static_cast<std::size_t>(state.range(0)), 10);
    const Eigen::MatrixXd gram = depcon::gram_matrix(data).values;
    depcon::cluster::KMeansOptions options;
    options.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(depcon::cluster::kernel_kmeans(gram, 6, options).objective);
    }
}
BENCHMARK(BM_KernelKMeans)->Arg(300)->Arg(600)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
