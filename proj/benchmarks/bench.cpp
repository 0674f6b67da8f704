#include <benchmark/benchmark.h>

#include "nestsim/geo_oracle.hpp"
#include "nestsim/nesting.hpp"
#include "nestsim/rng.hpp"
#include "nestsim/steering.hpp"
#include "nestsim/two_qubit.hpp"

using namespace nestsim;

namespace {

Ellipsoid generic_ellipsoid() {
    Mat3 s;
    SplitMix64 rng(1);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) s(i, j) = rng.uniform(-0.25, 0.25);
    return {SymMat3::gram(s), {0.3, -0.1, 0.15}};
}

void BM_eig_sym3(benchmark::State& state) {
    const SymMat3 q = generic_ellipsoid().q;
    for (auto _ : state) benchmark::DoNotOptimize(eig_sym3(q));
}
BENCHMARK(BM_eig_sym3);

void BM_max_radius(benchmark::State& state) {
    const Ellipsoid e = generic_ellipsoid();
    for (auto _ : state) benchmark::DoNotOptimize(max_radius(e));
}
BENCHMARK(BM_max_radius);

void BM_nesting_predicate(benchmark::State& state) {
    const NestingQuery q{generic_ellipsoid(), 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(nesting_predicate(q));
}
BENCHMARK(BM_nesting_predicate);

void BM_separability(benchmark::State& state) {
    CanonicalParams p;
    p.s = Mat3::diag(0.3, 0.25, -0.2);
    p.d = {0.1, 0.0, 0.2};
    const TwoQubitState s = assemble_canonical(p);
    for (auto _ : state) benchmark::DoNotOptimize(separability(s));
}
BENCHMARK(BM_separability);

void BM_steer(benchmark::State& state) {
    CanonicalParams p;
    p.s = Mat3::diag(0.3, 0.25, -0.2);
    const TwoQubitState s = assemble_canonical(p);
    const Measurement m = Measurement::projector({0.6, 0.0, 0.8});
    for (auto _ : state) benchmark::DoNotOptimize(steer(s, m));
}
BENCHMARK(BM_steer);

void BM_tetrahedron_search(benchmark::State& state) {
    const Ellipsoid e{SymMat3::diag(0.04, 0.04, 0.04), {0.5, 0, 0}};
    SearchBudget budget;
    budget.restarts = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(search_tetrahedron_3d(e, 1.0, budget, 3));
}
BENCHMARK(BM_tetrahedron_search)->Arg(8)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
