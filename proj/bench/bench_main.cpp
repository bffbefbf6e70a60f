#include "lipgerm/lne.hpp"
#include "lipgerm/surface.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace lipgerm;

namespace {

const std::string kFixtures = LIPGERM_FIXTURES;

RateGraph ladder(int n) {
    std::mt19937 rng(3);
    RateGraph g;
    for (int i = 0; i < 2 * n; ++i) g.add_vertex("v" + std::to_string(i), Rational(1 + long(rng() % 40), 1 + long(rng() % 6)));
    for (int i = 0; i + 1 < n; ++i) {
        g.add_edge(2 * i, 2 * i + 2);
        g.add_edge(2 * i + 1, 2 * i + 3);
        g.add_edge(2 * i, 2 * i + 1);
    }
    return g;
}

void BM_bottleneck_matrix(benchmark::State& st) {
    auto g = ladder(int(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(bottleneck_matrix(g));
}

void BM_bottleneck_matrix_serial(benchmark::State& st) {
    auto g = ladder(int(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(bottleneck_matrix_serial(g));
}

void BM_check_lne(benchmark::State& st) {
    auto s = load_surface(kFixtures + "/minimal-b2.json");
    for (auto _ : st) benchmark::DoNotOptimize(check_lne(s, Mode::Gauss));
}

void BM_check_lne_serial(benchmark::State& st) {
    auto s = load_surface(kFixtures + "/minimal-b2.json");
    for (auto _ : st) benchmark::DoNotOptimize(check_lne_serial(s, Mode::Gauss));
}

}  // namespace

BENCHMARK(BM_bottleneck_matrix)->Arg(16)->Arg(64)->Arg(128);
BENCHMARK(BM_bottleneck_matrix_serial)->Arg(16)->Arg(64)->Arg(128);
BENCHMARK(BM_check_lne);
BENCHMARK(BM_check_lne_serial);

BENCHMARK_MAIN();
