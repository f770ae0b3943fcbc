#include <benchmark/benchmark.h>

#include "binq4/curvecount.hpp"
#include "binq4/intmatrix.hpp"
#include "binq4/lattice.hpp"
#include "binq4/svariety.hpp"

#include <cstdint>

using namespace binq4;

namespace {

struct Lcg {
    std::uint64_t s;
    std::uint64_t next() {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return s >> 33;
    }
    long pick(long lo, long hi) { return lo + long(next() % std::uint64_t(hi - lo + 1)); }
};

IntMatrix random_matrix(Lcg& rng, int n, long lo, long hi) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m.at(i, j) = rng.pick(lo, hi);
    return m;
}

void bench_hnf(benchmark::State& state) {
    Lcg rng{1};
    int n = int(state.range(0));
    IntMatrix m = random_matrix(rng, n, -1000, 1000);
    for (auto _ : state)
        benchmark::DoNotOptimize(hnf(m));
}

void bench_snf(benchmark::State& state) {
    Lcg rng{2};
    int n = int(state.range(0));
    IntMatrix m = random_matrix(rng, n, -50, 50);
    for (auto _ : state)
        benchmark::DoNotOptimize(snf(m));
}

void bench_lll(benchmark::State& state) {
    Lcg rng{3};
    int n = int(state.range(0));
    IntMatrix b = random_matrix(rng, n, -10000, 10000);
    while (b.det() == 0)
        b = random_matrix(rng, n, -10000, 10000);
    IntMatrix gram = b.transpose() * b;
    for (auto _ : state)
        benchmark::DoNotOptimize(lll_transform(gram));
}

void bench_enumeration(benchmark::State& state) {
    IntMatrix gram = IntMatrix::diagonal({Int(2), Int(2), Int(2), Int(2)});
    Int bound = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(enumerate_gram_up_to(gram, bound));
}

void bench_enumerate_sn(benchmark::State& state) {
    long a = state.range(0);
    auto quat = quaternary_from_gram2(IntMatrix::diagonal({Int(2), Int(2), Int(2), Int(2)}));
    auto inst = make_instance(binary_from_coeffs(a, 0, a + 1), quat, 3, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(enumerate_Sn(inst));
}

void bench_detmethod(benchmark::State& state) {
    long box = state.range(0);
    // x^2 - 2 y^4 - y - 7 over a box of the given size.
    PlanarCurve curve = planar_curve({{-7, -1, 0, 0, -2}, {0}, {1}}, box, box);
    for (auto _ : state)
        benchmark::DoNotOptimize(count_points_detmethod(curve, 101));
}

void bench_bruteforce(benchmark::State& state) {
    long box = state.range(0);
    PlanarCurve curve = planar_curve({{-7, -1, 0, 0, -2}, {0}, {1}}, box, box);
    for (auto _ : state)
        benchmark::DoNotOptimize(count_points_bruteforce(curve));
}

BENCHMARK(bench_hnf)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(bench_snf)->Arg(4)->Arg(8);
BENCHMARK(bench_lll)->Arg(4)->Arg(8)->Arg(14);
BENCHMARK(bench_enumeration)->Arg(20)->Arg(60);
BENCHMARK(bench_enumerate_sn)->Arg(100)->Arg(300);
BENCHMARK(bench_detmethod)->Arg(100)->Arg(1000);
BENCHMARK(bench_bruteforce)->Arg(100)->Arg(1000);

} // namespace

BENCHMARK_MAIN();
