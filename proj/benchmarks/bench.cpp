// Hot-path microbenchmarks: diagram construction in both arithmetic regimes,
// the Perron solve, plain-double orbit throughput, constrained counting, and
// cylinder pullbacks.

#include "symdyn/coding.hpp"
#include "symdyn/diagram.hpp"
#include "symdyn/ldp.hpp"
#include "symdyn/maps.hpp"
#include "symdyn/spectral.hpp"

#include <benchmark/benchmark.h>

using namespace symdyn;

namespace {

PiecewiseMonotoneMap m52() { return make_mod1(Rational(1, 10), Rational(5, 2)); }

PiecewiseMonotoneMap golden_approx() {
    AlgebraicSpec phi;
    phi.minpoly = {Rational(-1), Rational(-1), Rational(1)};
    phi.bracket_lo = Rational(3, 2);
    phi.bracket_hi = Rational(17, 10);
    return make_beta(ParamValue(phi));
}

void bm_build_exact(benchmark::State& state) {
    const PiecewiseMonotoneMap m = m52();
    for (auto _ : state) {
        Diagram d = build_truncation(m, int(state.range(0)));
        benchmark::DoNotOptimize(d.vertices.size());
    }
}
BENCHMARK(bm_build_exact)->Arg(8)->Arg(12)->Arg(16);

void bm_build_approx(benchmark::State& state) {
    const PiecewiseMonotoneMap m = golden_approx();
    for (auto _ : state) {
        Diagram d = build_truncation(m, int(state.range(0)));
        benchmark::DoNotOptimize(d.vertices.size());
    }
}
BENCHMARK(bm_build_approx)->Arg(8)->Arg(16)->Arg(32);

void bm_perron(benchmark::State& state) {
    const Diagram d = build_truncation(m52(), int(state.range(0)));
    for (auto _ : state) {
        MMEModel model = mme_on_truncation(d);
        benchmark::DoNotOptimize(model.h);
    }
}
BENCHMARK(bm_perron)->Arg(12)->Arg(20);

void bm_orbit_doubles(benchmark::State& state) {
    const DoubleMap dm = DoubleMap::from(m52());
    double x = 0.1234;
    for (auto _ : state) {
        for (int i = 0; i < 1000; ++i) x = dm.eval(x);
        benchmark::DoNotOptimize(x);
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(bm_orbit_doubles);

void bm_constrained_count(benchmark::State& state) {
    const PiecewiseMonotoneMap m = make_mod1(Rational(0), Rational(2));
    const Diagram d = build_truncation(m, 4);
    const MMEModel model = mme_on_truncation(d);
    const std::vector<double> f = {1.0, 0.0};
    for (auto _ : state) {
        unsigned long long c =
            count_words_constrained(d, model.scc, int(state.range(0)), f, 0.4, 0.6);
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(bm_constrained_count)->Arg(16)->Arg(32)->Arg(64);

void bm_cylinder_pullback(benchmark::State& state) {
    const PiecewiseMonotoneMap m = m52();
    const std::vector<Word> words = enumerate_words(m, int(state.range(0)));
    for (auto _ : state) {
        for (const Word& u : words) {
            CylinderResult c = cylinder_interval(m, u);
            benchmark::DoNotOptimize(c.empty);
        }
    }
    state.SetItemsProcessed(state.iterations() * long(words.size()));
}
BENCHMARK(bm_cylinder_pullback)->Arg(6)->Arg(8);

void bm_sample_paths(benchmark::State& state) {
    const MMEModel model = mme_on_truncation(build_truncation(m52(), 12));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        SamplePath p = sample_mme(model, int(state.range(0)), seed++);
        benchmark::DoNotOptimize(p.word.size());
    }
}
BENCHMARK(bm_sample_paths)->Arg(64)->Arg(256);

} // namespace

BENCHMARK_MAIN();
