#include <benchmark/benchmark.h>

#include <qherald/analysis.hpp>
#include <qherald/protocol.hpp>

using namespace qherald;

namespace {

const SystemParams kParams{10.0, 10.0, 1.0, 0.1, 0.1};

void BM_JointEmissionState(benchmark::State &state)
{
    for (auto _ : state) benchmark::DoNotOptimize(joint_emission_state(kParams));
}
BENCHMARK(BM_JointEmissionState);

void BM_GoldenCascade(benchmark::State &state)
{
    const auto angle = SplitterAngle::canonical();
    const auto seq = ClickSequence::golden();
    for (auto _ : state) benchmark::DoNotOptimize(run_cascade(kParams, angle, seq));
}
BENCHMARK(BM_GoldenCascade);

void BM_EnumerateOutcomes(benchmark::State &state)
{
    const auto angle = SplitterAngle::canonical();
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_outcomes(kParams, angle));
}
BENCHMARK(BM_EnumerateOutcomes)->Unit(benchmark::kMillisecond);

void BM_SweepPtotal(benchmark::State &state)
{
    const Grid grid{0.0, 0.5, static_cast<std::size_t>(state.range(0))};
    const auto angle = SplitterAngle::canonical();
    for (auto _ : state) benchmark::DoNotOptimize(sweep_ptotal(kParams, angle, grid));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SweepPtotal)->Arg(1000)->Arg(100000);

void BM_FidelityVsTheta(benchmark::State &state)
{
    const Grid grid{0.0, 1.5, 301};
    for (auto _ : state) benchmark::DoNotOptimize(fidelity_vs_theta(kParams, grid));
}
BENCHMARK(BM_FidelityVsTheta)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
