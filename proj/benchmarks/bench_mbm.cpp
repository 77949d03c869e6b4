#include <benchmark/benchmark.h>

#include "mbm/constellation.hpp"
#include "mbm/distance.hpp"
#include "mbm/optimizer.hpp"
#include "mbm/sim.hpp"

using namespace mbm;

static void BM_draw_open_loop(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(draw_open_loop(k, seed++));
    }
}
BENCHMARK(BM_draw_open_loop)->Arg(4)->Arg(8);

static void BM_min_pairwise_distance(benchmark::State& state) {
    const Constellation c = draw_open_loop(static_cast<int>(state.range(0)), 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(min_pairwise_distance(c.points));
    }
    state.SetComplexityN(static_cast<std::int64_t>(c.points.size()));
}
BENCHMARK(BM_min_pairwise_distance)->Arg(4)->Arg(6)->Arg(8)->Complexity();

static void BM_optimize_weights(benchmark::State& state) {
    const Constellation c = draw_open_loop(4, 0x5EED);
    PerturbationSchedule sched;
    sched.max_trials = state.range(0);
    sched.stall_limit = state.range(0);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimize_weights(c, sched, seed++));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_optimize_weights)->Arg(1000)->Arg(5000);

static void BM_simulate_point(benchmark::State& state) {
    const Constellation c = reference_qam(4);
    SimConfig cfg;
    cfg.snr_grid_db = {12.0};
    cfg.trials_per_point = state.range(0);
    cfg.min_errors = 0;
    cfg.channel = Channel::awgn_qam;
    cfg.seed = 3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_ser(c, cfg));
        ++cfg.seed;
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_simulate_point)->Arg(16384)->Arg(65536);

static void BM_simulate_point_fading(benchmark::State& state) {
    const Constellation c = reference_qam(2);
    SimConfig cfg;
    cfg.snr_grid_db = {12.0};
    cfg.trials_per_point = state.range(0);
    cfg.min_errors = 0;
    cfg.channel = Channel::rayleigh_qam;
    cfg.seed = 3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_ser(c, cfg));
        ++cfg.seed;
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_simulate_point_fading)->Arg(16384)->Arg(65536);

BENCHMARK_MAIN();
