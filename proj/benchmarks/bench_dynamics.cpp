#include <benchmark/benchmark.h>

#include <qherald/atom_cavity.hpp>
#include <qherald/trajectories.hpp>

using namespace qherald;

namespace {

const SystemParams kParams{10.0, 10.0, 1.0, 0.1, 0.1};

void BM_NoJumpAmplitudes(benchmark::State &state)
{
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(no_jump_amplitudes(kParams, t));
        t += 1e-3;
    }
}
BENCHMARK(BM_NoJumpAmplitudes);

void BM_SingleTrajectory(benchmark::State &state)
{
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_trajectory(kParams, 0.2, ++seed));
}
BENCHMARK(BM_SingleTrajectory);

// workers = 0 uses every hardware thread
void BM_Ensemble(benchmark::State &state)
{
    EnsembleOptions opt;
    opt.workers = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(simulate_ensemble(kParams, 0.2, 10000, 7, opt));
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_Ensemble)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_MasterEquation(benchmark::State &state)
{
    for (auto _ : state) benchmark::DoNotOptimize(integrate_master_equation(kParams, 0.2, 1e-4));
}
BENCHMARK(BM_MasterEquation)->Unit(benchmark::kMillisecond);

} // namespace
