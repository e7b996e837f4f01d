#include <benchmark/benchmark.h>

#include "pmdsim/analytic.hpp"
#include "pmdsim/propagate.hpp"
#include "pmdsim/pulse.hpp"

#include <cmath>
#include <random>

using namespace pmdsim;

namespace {

Axis bench_axis(int salt) {
    return Axis::from_angles(0.3 + 0.11 * salt, 1.7 * salt);
}

NetworkSpec five_trunk_chain() {
    return NetworkSpec{"",
                       {Trunk::pmd(0.2, Axis::z()), Trunk::pdl(0.5, bench_axis(1)),
                        Trunk::pmd(0.12, bench_axis(2)), Trunk::pdl(1.1, bench_axis(3)),
                        Trunk::pmd(0.16, bench_axis(4))}};
}

void BM_PmdOperator(benchmark::State& state) {
    const Axis axis = bench_axis(1);
    double omega = 1216.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pmd_operator(0.4, axis, omega));
        omega += 1e-6;
    }
}
BENCHMARK(BM_PmdOperator);

void BM_NetworkOperator(benchmark::State& state) {
    const NetworkSpec net = five_trunk_chain();
    double omega = 1216.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(network_operator_at(net, omega));
        omega += 1e-6;
    }
}
BENCHMARK(BM_NetworkOperator);

void BM_ForwardTransform(benchmark::State& state) {
    const Grid grid(static_cast<std::uint32_t>(state.range(0)), 160.0);
    const auto field = gaussian_envelope(GaussianPulse(10.0, 1216.0), grid);
    for (auto _ : state) {
        benchmark::DoNotOptimize(forward_transform(field, grid));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ForwardTransform)->RangeMultiplier(4)->Range(1024, 16384)->Complexity();

void BM_Propagate(benchmark::State& state) {
    const NetworkSpec net{"", {Trunk::pmd(1.0, Axis::z()), Trunk::pdl(0.5, bench_axis(2))}};
    const GaussianPulse pulse(10.0, 1216.0);
    const PolState state0 = plus_state(bench_axis(5));
    const Grid grid(static_cast<std::uint32_t>(state.range(0)), 162.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(propagate(net, pulse, state0, grid));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Propagate)->RangeMultiplier(4)->Range(1024, 16384)->Complexity();

void BM_MeanToaClosedForm(benchmark::State& state) {
    const PolState psi0 = plus_state(bench_axis(6));
    const Axis axis = bench_axis(7);
    double mu = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mean_toa_pmd_pdl(psi0, 1.0, 1216.0, mu, axis, 10.0));
        mu += 1e-9;
    }
}
BENCHMARK(BM_MeanToaClosedForm);

void BM_MultiTrunkWeakToa(benchmark::State& state) {
    const NetworkSpec net = five_trunk_chain();
    const PolState psi0 = plus_state(bench_axis(8));
    for (auto _ : state) {
        benchmark::DoNotOptimize(multi_trunk_weak_toa(net, psi0, 1216.0));
    }
}
BENCHMARK(BM_MultiTrunkWeakToa);

void BM_PolarDecompose(benchmark::State& state) {
    const JonesOp t = pdl_operator(1.2, bench_axis(9)) * pmd_operator(0.7, Axis::z(), 1216.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(polar_decompose(t));
    }
}
BENCHMARK(BM_PolarDecompose);

} // namespace

BENCHMARK_MAIN();
