#include <benchmark/benchmark.h>

#include "flatdisc/asymptotics.hpp"
#include "flatdisc/lattice.hpp"
#include "flatdisc/spectral.hpp"

using namespace flatdisc;

static void BM_SweepProfile(benchmark::State& st) {
    Body2D b = Body2D::gen_ellipse(4.0);
    double R = double(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(sweep_profile(b, R, 0.37));
    st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_SweepProfile)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oN);

static void BM_CountPoints(benchmark::State& st) {
    Body2D b = Body2D::gen_ellipse(4.0).rotated(0.3);
    double R = double(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(count_points(b, R, {0.21, 0.37}));
    st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_CountPoints)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oN);

static void BM_LpNorm(benchmark::State& st) {
    Body2D b = Body2D::disk();
    LpOptions o;
    o.samples = 64;
    o.seed = 1;
    o.threads = 1;
    for (auto _ : st) benchmark::DoNotOptimize(lp_norms(b, double(st.range(0)), {1.0, 2.0}, o));
}
BENCHMARK(BM_LpNorm)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_ChiHatSlice(benchmark::State& st) {
    Body2D b = Body2D::gen_ellipse(4.0);
    double s = double(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(chi_hat_slice(b, s));
}
BENCHMARK(BM_ChiHatSlice)->Arg(10)->Arg(100)->Arg(1000);

static void BM_ChiHat2D(benchmark::State& st) {
    Body2D b = Body2D::gen_ellipse(4.0).rotated(0.7);
    double r = double(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(chi_hat_2d(b, {0.6 * r, 0.8 * r}));
}
BENCHMARK(BM_ChiHat2D)->Arg(10)->Arg(100);

static void BM_MainTerm(benchmark::State& st) {
    MainTerm mt = MainTerm::from_body(Body2D::gen_ellipse(4.0));
    double z2 = 0.0;
    for (auto _ : st) {
        benchmark::DoNotOptimize(mt(1024.0, {0.1, z2}));
        z2 += 1e-3;
    }
}
BENCHMARK(BM_MainTerm);

BENCHMARK_MAIN();
