#include <benchmark/benchmark.h>

#include <random>

#include "mmnoma/beam_design.hpp"
#include "mmnoma/pairing.hpp"
#include "mmnoma/rate_engine.hpp"

using namespace mmnoma;

static void BM_BeamGain(benchmark::State& state) {
    const ArrayGeometry geom(static_cast<int>(state.range(0)));
    const Awv w = steer_single(geom, Direction(0.3));
    double phi = -1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(beam_gain(w, Direction(phi)));
        phi = phi > 0.99 ? -1.0 : phi + 1e-3;
    }
}
BENCHMARK(BM_BeamGain)->Arg(8)->Arg(32)->Arg(128);

static void BM_Pattern(benchmark::State& state) {
    const Awv w = steer_single(ArrayGeometry(32), Direction(0.3));
    for (auto _ : state) {
        benchmark::DoNotOptimize(pattern(w, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_Pattern)->Arg(1024)->Arg(4096);

static void BM_WideBeam(benchmark::State& state) {
    const ArrayGeometry geom(32);
    const double width = 2.0 * static_cast<double>(state.range(0)) / 32;
    for (auto _ : state) {
        benchmark::DoNotOptimize(wide_beam(geom, Direction(0.0), width));
    }
}
BENCHMARK(BM_WideBeam)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_CmOptimize(benchmark::State& state) {
    const ArrayGeometry geom(static_cast<int>(state.range(0)));
    const double g = geom.n() / 2.0;
    const std::vector<BeamTarget> targets{{Direction(-0.3), g}, {Direction(0.4), g}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(cm_optimize_multibeam(geom, targets));
    }
}
BENCHMARK(BM_CmOptimize)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_NomaRates(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    NomaGroup group;
    for (int i = 0; i < state.range(0); ++i) {
        group.members.push_back({i, 100.0 * unit(rng), 1.0});
    }
    group.total_power = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(noma_rates(group));
    }
}
BENCHMARK(BM_NomaRates)->Arg(2)->Arg(8);

static void BM_ExhaustivePairing(benchmark::State& state) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> phi(-0.9, 0.9);
    PairingInstance inst;
    for (int id = 1; id <= state.range(0); ++id) {
        ChannelState c;
        c.user_id = id;
        c.direction = Direction(phi(rng));
        c.gain = 1.0 / id;
        c.avg_power = std::norm(c.gain);
        inst.users.push_back(c);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(exhaustive_pairing(inst));
    }
}
BENCHMARK(BM_ExhaustivePairing)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
