#include <benchmark/benchmark.h>

#include "cvqkd/attack_reduction.hpp"
#include "cvqkd/gaussian.hpp"
#include "cvqkd/key_rate.hpp"
#include "cvqkd/simulation.hpp"
#include "cvqkd/threshold.hpp"

namespace {

void SymplecticEigenvalues6x6(benchmark::State& state) {
    const cvqkd::GaussianState psi0 =
        cvqkd::build_initial_state(5.0, cvqkd::SideChannelParams(1.0, 1.5));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cvqkd::symplectic_eigenvalues(psi0.cov));
    }
}
BENCHMARK(SymplecticEigenvalues6x6);

void KeyRateAsymptotic(benchmark::State& state) {
    const cvqkd::ChannelParams ch(0.01, 0.02);
    const cvqkd::SideChannelParams sc(1.0, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cvqkd::key_rate_asymptotic(ch, 1.0, sc).rate);
    }
}
BENCHMARK(KeyRateAsymptotic);

void KeyRateFinite(benchmark::State& state) {
    const cvqkd::ChannelParams ch(0.1, 0.02);
    const cvqkd::SideChannelParams sc(1.0, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cvqkd::key_rate_finite(ch, 1e6, sc).rate);
    }
}
BENCHMARK(KeyRateFinite);

void EpsilonMax(benchmark::State& state) {
    const cvqkd::SideChannelParams sc(1.0, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cvqkd::epsilon_max(0.01, sc, 1e-10));
    }
}
BENCHMARK(EpsilonMax);

void VerifyReduction(benchmark::State& state) {
    const cvqkd::SideChannelParams sc(0.5, 2.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cvqkd::verify_reduction(2.0, sc, {0.3, -0.8}).max_deviation());
    }
}
BENCHMARK(VerifyReduction);

void SampleSession(benchmark::State& state) {
    const cvqkd::ChannelParams ch(0.5, 0.05);
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cvqkd::sample_session(10.0, ch, n, 1));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(SampleSession)->Arg(1 << 10)->Arg(1 << 14);

}  // namespace

BENCHMARK_MAIN();
