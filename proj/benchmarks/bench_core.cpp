#include <benchmark/benchmark.h>

#include "sgsim/contrast.hpp"
#include "sgsim/integrator.hpp"
#include "sgsim/loopsolver.hpp"
#include "sgsim/trajectory.hpp"
#include "sgsim/wavepacket.hpp"

using namespace sgsim;

namespace {

ExperimentConfig table2() {
    ExperimentConfig cfg;
    cfg.particle = {1e-15, 2e-11, 0.0, 0.0};
    cfg.stages = {
        {1, StageKind::Harmonic, 0.0, 2507.0, 0.0, 0.01784, SpinState::SxPlusMinusOne},
        {2, StageKind::InvertedHarmonic, 10.0, 0.0, 1e6, 0.03, SpinState::SxZero},
        {3, StageKind::Harmonic, 0.0, 5e3, 0.0, 0.00415, SpinState::SxPlusMinusOne},
        {4, StageKind::InvertedHarmonic, 10.0, 0.0, 992199.56, 0.03, SpinState::SxZero},
        {5, StageKind::Harmonic, 0.0, 2414.07, 0.0, 0.01853, SpinState::SxPlusMinusOne},
    };
    return cfg;
}

ClosureProblem partial_problem() {
    ClosureProblem p;
    ConfigDocument doc;
    doc.config = table2();
    doc.presence.resize(5);
    for (auto& pr : doc.presence) pr = {true, true, true, true, true, true};
    doc.presence[0].duration = false;
    doc.presence[2].duration = false;
    doc.presence[3].eta_nonlinear = false;
    doc.presence[4].eta_linear = false;
    doc.presence[4].duration = false;
    p.input = doc;
    return p;
}

void BM_RunProtocol(benchmark::State& state) {
    const auto cfg = table2();
    for (auto _ : state) {
        auto r = run_protocol(cfg, 1e-4);
        benchmark::DoNotOptimize(r.peak.separation);
    }
}
BENCHMARK(BM_RunProtocol);

void BM_IntegrateEnhancementStage(benchmark::State& state) {
    const auto cfg = table2();
    const auto in = stage1_trajectory(cfg, +1).end_state();
    IntegratorSettings set;
    set.tolerance = std::pow(10.0, -static_cast<double>(state.range(0)));
    for (auto _ : state) {
        auto tr = integrate_stage(cfg.constants, cfg.stages[1], cfg.particle.mass, +1, in,
                                  set);
        benchmark::DoNotOptimize(tr.final_state.x);
    }
}
BENCHMARK(BM_IntegrateEnhancementStage)->Arg(9)->Arg(12);

void BM_PacketChain(benchmark::State& state) {
    const auto cfg = table2();
    for (auto _ : state) {
        auto r = chain_through_protocol(cfg, 64);
        benchmark::DoNotOptimize(r.sigma_max);
    }
}
BENCHMARK(BM_PacketChain);

void BM_ContrastPoint(benchmark::State& state) {
    const auto cfg = solve_full_closure(partial_problem()).solved;
    const double sigma = chain_through_protocol(cfg).sigma_max;
    for (auto _ : state) {
        auto d = perturbed_protocol_deviations(
            cfg, {PerturbationAxis::NonlinearGradient, 1e-7});
        benchmark::DoNotOptimize(contrast_from_deviations(d, sigma));
    }
}
BENCHMARK(BM_ContrastPoint);

void BM_SolveFullClosure(benchmark::State& state) {
    const auto problem = partial_problem();
    for (auto _ : state) {
        auto rep = solve_full_closure(problem);
        benchmark::DoNotOptimize(rep.eta5);
    }
}
BENCHMARK(BM_SolveFullClosure);

}  // namespace

BENCHMARK_MAIN();
