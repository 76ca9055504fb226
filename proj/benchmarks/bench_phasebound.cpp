#include <benchmark/benchmark.h>

#include "phasebound/phasebound.hpp"

#include <numbers>

using namespace phasebound;

namespace {

Potential catalog(PotentialKind kind, double U0, double d) {
    PotentialParams p;
    p.U0 = U0;
    p.d = d;
    return make_potential(kind, p);
}

Potential delta(double G) {
    PotentialParams p;
    p.G = G;
    return make_potential(PotentialKind::Delta, p);
}

void BM_LeftSeparatrix(benchmark::State& state) {
    Potential pot = catalog(PotentialKind::Lorentzian, 1.0, 1.0);
    PhaseProblem prob(pot, 0.05, 0.1);
    IntegratorControl ctrl;
    ctrl.record = false;
    for (auto _ : state) benchmark::DoNotOptimize(left_separatrix(prob, ctrl).terminal.branch);
}
BENCHMARK(BM_LeftSeparatrix)->Unit(benchmark::kMillisecond);

void BM_CountLevels(benchmark::State& state) {
    Potential pot = catalog(PotentialKind::Lorentzian, 1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(count_levels(pot, 0.1));
}
BENCHMARK(BM_CountLevels)->Unit(benchmark::kMillisecond);

void BM_FindEigenvaluesSech(benchmark::State& state) {
    Potential pot = catalog(PotentialKind::Sech, 2.3, 1.0);
    SpectrumOptions opts;
    opts.threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(find_eigenvalues(pot, 0.4, opts).level_count);
}
BENCHMARK(BM_FindEigenvaluesSech)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_FindEigenvaluesDelta(benchmark::State& state) {
    Potential pot = delta(std::numbers::pi / 3);
    for (auto _ : state) benchmark::DoNotOptimize(find_eigenvalues(pot, 0.5).level_count);
}
BENCHMARK(BM_FindEigenvaluesDelta)->Unit(benchmark::kMillisecond);

void BM_Eigenstate(benchmark::State& state) {
    Potential pot = catalog(PotentialKind::Sech, 1.0, 1.0);
    double E = find_eigenvalues(pot, 0.5).eigenvalues.back().energy;
    for (auto _ : state) benchmark::DoNotOptimize(eigenstate(pot, 0.5, E).W);
}
BENCHMARK(BM_Eigenstate)->Unit(benchmark::kMillisecond);

void BM_Numerov(benchmark::State& state) {
    Potential pot = catalog(PotentialKind::Sech, 0.02, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(nonrelativistic_levels(pot, 50.0).eps.size());
}
BENCHMARK(BM_Numerov)->Unit(benchmark::kMillisecond);

void BM_BohrSommerfeld(benchmark::State& state) {
    Potential pot = catalog(PotentialKind::Lorentzian, 50.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(bohr_sommerfeld_levels(pot, 1.0).levels.size());
}
BENCHMARK(BM_BohrSommerfeld)->Unit(benchmark::kMillisecond);

void BM_Portrait(benchmark::State& state) {
    Potential pot = catalog(PotentialKind::Lorentzian, 1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(separatrix_in_phase_space(pot, 0.1, 0.05).index);
}
BENCHMARK(BM_Portrait)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
