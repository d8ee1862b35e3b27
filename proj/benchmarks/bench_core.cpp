#include <benchmark/benchmark.h>

#include <cmath>

#include "spinctrl/dynamics.hpp"
#include "spinctrl/field_analysis.hpp"
#include "spinctrl/operators.hpp"
#include "spinctrl/spectral_stats.hpp"

using namespace spinctrl;

namespace {

struct Fixture {
    ParityBasis basis;
    OperatorMatrix H01;
    OperatorMatrix Hc;
};

Fixture make_fixture(int L, int K) {
    ChainParams p;
    p.L = L;
    p.Gamma = 1.0;
    ParityBasis basis = parity_adapt(enumerate_sector(L, K), +1);
    OperatorMatrix H01 = build_H01(p, basis);
    OperatorMatrix Hc = build_Hc(p, basis);
    return {std::move(basis), std::move(H01), std::move(Hc)};
}

void BM_EnumerateSector(benchmark::State& state) {
    const int K = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_sector(15, K).dim());
}

void BM_BuildH01(benchmark::State& state) {
    ChainParams p;
    p.L = 15;
    p.Gamma = 1.0;
    const ParityBasis basis =
        parity_adapt(enumerate_sector(15, static_cast<int>(state.range(0))), +1);
    for (auto _ : state) benchmark::DoNotOptimize(build_H01(p, basis).data.sum());
}

void BM_Diagonalize(benchmark::State& state) {
    const Fixture f = make_fixture(15, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(diagonalize(f.H01).energies.sum());
}

void BM_PropagationStep(benchmark::State& state) {
    const Fixture f = make_fixture(15, static_cast<int>(state.range(0)));
    const PropagationCache cache = make_propagation_cache(f.H01, f.Hc, 0.01);
    State psi = State::Zero(f.H01.dim());
    psi[0] = 1.0;
    for (auto _ : state) {
        psi = step(psi, 0.1, cache);
        benchmark::DoNotOptimize(psi);
    }
}

void BM_PowerSpectrum(benchmark::State& state) {
    ControlField field;
    field.dt = 0.01;
    const int n = static_cast<int>(state.range(0));
    for (int j = 0; j < n; ++j) field.samples.push_back(std::sin(0.37 * j) + 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(analyze(field).sipr);
}

void BM_BrodyFit(benchmark::State& state) {
    const Fixture f = make_fixture(15, 4);
    const SpacingSample sample = level_spacings(diagonalize(f.H01), 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(brody_fit(sample).beta);
}

BENCHMARK(BM_EnumerateSector)->Arg(2)->Arg(4);
BENCHMARK(BM_BuildH01)->Arg(2)->Arg(4);
BENCHMARK(BM_Diagonalize)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PropagationStep)->Arg(2)->Arg(4);
BENCHMARK(BM_PowerSpectrum)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_BrodyFit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
