#include "padic/evolve.hpp"
#include "padic/harmonic.hpp"
#include "padic/monotone.hpp"
#include "padic/sobolev.hpp"
#include "padic/vladimirov.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace padic;

namespace {

// Grids of M = 2^digits cells.
BallGrid binary_grid(int digits) { return BallGrid(2, 1, digits - 1); }

GridFunction noise(const BallGrid& g, bool complex_values) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n;
    GridFunction f(g);
    for (std::int64_t a = 0; a < g.size(); ++a) f[a] = Complex{n(rng), complex_values ? n(rng) : 0.0};
    return f;
}

void BM_ForwardDirect(benchmark::State& state) {
    const auto f = noise(binary_grid(static_cast<int>(state.range(0))), true);
    for (auto _ : state) benchmark::DoNotOptimize(forward(f, TransformMethod::direct));
    state.SetComplexityN(f.size());
}
BENCHMARK(BM_ForwardDirect)->DenseRange(6, 12, 2)->Complexity(benchmark::oNSquared);

void BM_ForwardFast(benchmark::State& state) {
    const auto f = noise(binary_grid(static_cast<int>(state.range(0))), true);
    for (auto _ : state) benchmark::DoNotOptimize(forward(f, TransformMethod::fast));
    state.SetComplexityN(f.size());
}
BENCHMARK(BM_ForwardFast)->DenseRange(6, 14, 2)->Complexity(benchmark::oNLogN);

void BM_ApplyKernel(benchmark::State& state) {
    const VladimirovOperator op(binary_grid(static_cast<int>(state.range(0))), 0.5);
    const auto f = noise(op.grid(), true);
    for (auto _ : state) benchmark::DoNotOptimize(op.apply_kernel(f));
}
BENCHMARK(BM_ApplyKernel)->DenseRange(6, 10, 2);

void BM_ApplySpectral(benchmark::State& state) {
    const VladimirovOperator op(binary_grid(static_cast<int>(state.range(0))), 0.5);
    const auto f = noise(op.grid(), true);
    for (auto _ : state) benchmark::DoNotOptimize(op.apply_spectral(f));
}
BENCHMARK(BM_ApplySpectral)->DenseRange(6, 10, 2);

void BM_AgsSeminorm(benchmark::State& state) {
    const auto f = noise(binary_grid(static_cast<int>(state.range(0))), true);
    for (auto _ : state) benchmark::DoNotOptimize(ags_seminorm(f, 0.5));
}
BENCHMARK(BM_AgsSeminorm)->DenseRange(6, 10, 2);

// Factorization of tau D is shared across solves; this measures one prox step.
void BM_ProxStep(benchmark::State& state) {
    const VladimirovOperator op(binary_grid(static_cast<int>(state.range(0))), 0.5);
    const ProxSolver solver(op, PowerLaw(static_cast<double>(state.range(1)) / 2.0), 0.1);
    const auto f = noise(op.grid(), false);
    for (auto _ : state) benchmark::DoNotOptimize(solver.solve(f));
}
BENCHMARK(BM_ProxStep)->ArgsProduct({{4, 6, 8}, {1, 2, 4}})->ArgNames({"digits", "2m"})->Unit(benchmark::kMillisecond);

void BM_Trajectory(benchmark::State& state) {
    const VladimirovOperator op(binary_grid(6), 0.5);
    SolverConfig cfg;
    cfg.tau = 0.05;
    cfg.horizon = 1.0;
    const auto u0 = noise(op.grid(), false);
    for (auto _ : state) benchmark::DoNotOptimize(run(u0, cfg, op, PowerLaw(2.0)));
}
BENCHMARK(BM_Trajectory)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
