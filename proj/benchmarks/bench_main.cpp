#include <benchmark/benchmark.h>

#include "pgc/harness/generators.hpp"
#include "pgc/rng.hpp"
#include "pgc/spectral.hpp"

using namespace pgc;

static void BM_TowerDiagonal(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    for (auto _ : st) {
        Tower t(diagonal_in_full(n));
        benchmark::DoNotOptimize(t.mu());
    }
}
BENCHMARK(BM_TowerDiagonal)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

static void BM_TowerScalars(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    for (auto _ : st) {
        Tower t(scalars_in_full(n));
        benchmark::DoNotOptimize(t.mu());
    }
}
BENCHMARK(BM_TowerScalars)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

// building the transform calibrates the Fourier matrix on both two-box spaces
static void BM_FourierMatrix(benchmark::State& st) {
    Tower t(diagonal_in_full(static_cast<int>(st.range(0))));
    for (auto _ : st) {
        Qfa q(t);
        benchmark::DoNotOptimize(q.calibration());
    }
}
BENCHMARK(BM_FourierMatrix)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

static void BM_MultiplierSolve(benchmark::State& st) {
    Tower t(scalars_in_full(static_cast<int>(st.range(0))));
    Rng r(1);
    const int n = t.M().total_size();
    const std::vector<Mat> ks = {r.gaussian(n, n), r.gaussian(n, n)};
    t.multiplier_system();  // shared least-squares factorisation, built once per tower
    for (auto _ : st) {
        auto phi = Channel::from_kraus(t, ks);
        benchmark::DoNotOptimize(phi.hat().x.norm_inf());
    }
}
BENCHMARK(BM_MultiplierSolve)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

static void BM_CertifyAdUnitary(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    Tower t(diagonal_in_full(n));
    Qfa q(t);
    auto phi = Channel::from_kraus(t, {harness::clock_matrix(n)});
    for (auto _ : st) {
        auto c = certify_phase_group(phi, &q);
        benchmark::DoNotOptimize(c.m);
    }
}
BENCHMARK(BM_CertifyAdUnitary)->DenseRange(2, 6)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
