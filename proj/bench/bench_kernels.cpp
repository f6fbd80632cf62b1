// Serial reference kernels against their OpenMP counterparts.
// Arg 0 selects serial (jobs = 1) and arg 1 parallel (all threads).

#include <benchmark/benchmark.h>
#include <omp.h>

#include <cmath>
#include <vector>

#include "vpm/cylinder/cylinder.hpp"
#include "vpm/poiseuille/poiseuille.hpp"
#include "vpm/stagnation/stagnation.hpp"

using namespace vpm;

namespace {

const std::vector<MaskRecipe> kMasks{{"standard", MaskProfile::discontinuous(), 0.0, false, 0.0, false},
                                     {"shifted", MaskProfile::discontinuous(), 1.0, true, 0.0, false}};

int jobs_for(const benchmark::State& state) { return state.range(0) == 0 ? 1 : omp_get_max_threads(); }

void BM_CylinderStep(benchmark::State& state) {
    CylinderConfig c;
    c.Re = 200.0;
    c.eta = 1e-3;
    c.spec = {compactify(MaskProfile::erf(), 1.0), 0.0, 3.8 * c.eps()};
    c.n_theta = static_cast<std::size_t>(state.range(1));
    c.radial_points = 288;
    const ExecPolicy exec = state.range(0) == 0 ? ExecPolicy::serial : ExecPolicy::parallel;
    CylinderSolver solver(c, discretize(c, CylinderMode::penalized), exec);
    for (auto _ : state) {
        solver.step();
        benchmark::DoNotOptimize(solver.state().u.data());
    }
    state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}
BENCHMARK(BM_CylinderStep)->ArgsProduct({{0, 1}, {64, 128}})->Unit(benchmark::kMillisecond);

void BM_PoiseuilleSweep(benchmark::State& state) {
    const std::vector<double> eps{0.0316, 0.01, 0.00316, 0.001};
    for (auto _ : state) benchmark::DoNotOptimize(poiseuille_sweep(eps, kMasks, 4001, -1.0, jobs_for(state)));
    state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}
BENCHMARK(BM_PoiseuilleSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_StagnationSweep(benchmark::State& state) {
    const std::vector<double> etas{1e-2, 1e-3, 1e-4};
    for (auto _ : state) {
        benchmark::DoNotOptimize(stagnation_regime_sweep({100.0}, etas, kMasks, 10.0, 2001, jobs_for(state)));
    }
    state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}
BENCHMARK(BM_StagnationSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
