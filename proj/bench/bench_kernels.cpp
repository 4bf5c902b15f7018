// Serial reference vs OpenMP kernel for each data-parallel routine.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cdl/assumption_tests.hpp"
#include "cdl/graph.hpp"
#include "cdl/scm.hpp"

namespace {

using namespace cdl;

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01;
    std::vector<double> v(n);
    for (double& x : v) x = n01(rng);
    return v;
}

IndependenceSet chain_constraints(int n) {
    VariableSet nodes;
    EdgeSet edges;
    for (int i = 0; i < n; ++i) nodes.insert("V" + std::to_string(i));
    for (int i = 0; i + 1 < n; ++i) edges.insert({"V" + std::to_string(i), "V" + std::to_string(i + 1)});
    return implied_independencies(Dag(nodes, edges));
}

template <bool Parallel>
void BM_Mec(benchmark::State& state) {
    const auto c = chain_constraints(static_cast<int>(state.range(0)));
    const auto vars = c.variables();
    for (auto _ : state) {
        benchmark::DoNotOptimize(Parallel ? enumerate_mec(vars, c) : enumerate_mec_serial(vars, c));
    }
}
BENCHMARK(BM_Mec<false>)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Mec<true>)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

template <bool Parallel>
void BM_Permutation(benchmark::State& state) {
    const auto x = noise(static_cast<std::size_t>(state.range(0)), 1);
    const auto r = noise(x.size(), 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(Parallel ? residual_independence_test(x, r)
                                          : residual_independence_test_serial(x, r));
    }
}
BENCHMARK(BM_Permutation<false>)->Arg(300)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Permutation<true>)->Arg(300)->Arg(2000)->Unit(benchmark::kMillisecond);

template <bool Parallel>
void BM_Sampling(benchmark::State& state) {
    const Scm m = parse_scm(
        "graph:\n A -> B\n A -> C\n B -> C\n"
        "equations:\n B = 0.5*A^2 + U\n C := sin(A) - B + U_C\n"
        "noise:\n U_A ~ Normal(0, 1)\n U_B ~ Normal(0, 1)\n U_C ~ Uniform(-1, 1)\n");
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(Parallel ? sample_scm(m, n, 3) : sample_scm_serial(m, n, 3));
    }
}
BENCHMARK(BM_Sampling<false>)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sampling<true>)->Arg(100000)->Unit(benchmark::kMillisecond);

template <bool Parallel>
void BM_SavitzkyGolay(benchmark::State& state) {
    const auto y = noise(static_cast<std::size_t>(state.range(0)), 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(Parallel ? savitzky_golay_smooth(y, 31, 3) : savitzky_golay_smooth_serial(y, 31, 3));
    }
}
BENCHMARK(BM_SavitzkyGolay<false>)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SavitzkyGolay<true>)->Arg(20000)->Unit(benchmark::kMillisecond);

template <bool Parallel>
void BM_Calibration(benchmark::State& state) {
    auto rejects = [](std::uint64_t seed) {
        return jarque_bera(noise(500, seed)).decision == Decision::RejectNull;
    };
    const auto trials = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(Parallel ? rejection_rate(trials, 5, rejects)
                                          : rejection_rate_serial(trials, 5, rejects));
    }
}
BENCHMARK(BM_Calibration<false>)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Calibration<true>)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
