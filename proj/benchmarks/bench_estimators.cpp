#include <benchmark/benchmark.h>

#include <map>
#include <utility>

#include "lfdepth/cost_volume.hpp"
#include "lfdepth/epi.hpp"
#include "lfdepth/lsg.hpp"
#include "lfdepth/refine.hpp"
#include "lfdepth/sweep.hpp"
#include "lfdepth/synth.hpp"

namespace {

using namespace lfdepth;

struct BenchScene {
    LightField field;
    SceneMeta meta;
};

// One textured plane per angular resolution; built once per extent.
const BenchScene& scene_for(int size, int views) {
    static std::map<std::pair<int, int>, BenchScene> cache;
    const auto key = std::make_pair(size, views);
    auto it = cache.find(key);
    if (it == cache.end()) {
        SynthSpec spec;
        spec.width = size;
        spec.height = size;
        spec.n_u = views;
        spec.n_v = views;
        spec.layers.push_back({0.8, 17});
        it = cache.emplace(key, BenchScene{synth_scene(spec).field, spec.meta}).first;
    }
    return it->second;
}

void bm_lsg(benchmark::State& state) {
    const auto& s = scene_for(static_cast<int>(state.range(0)), 9);
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_lsg(s.field, s.meta, LsgParams{}));
    }
}

void bm_sweep(benchmark::State& state) {
    const auto& s = scene_for(static_cast<int>(state.range(0)), 9);
    SweepParams params;
    params.n_disparities = static_cast<int>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_sweep(s.field, s.meta, params));
    }
}

void bm_cost_volume(benchmark::State& state) {
    const auto& s = scene_for(static_cast<int>(state.range(0)), 9);
    SweepParams params;
    params.n_disparities = static_cast<int>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_cost_volume(s.field, s.meta, params));
    }
}

void bm_epi_level0(benchmark::State& state) {
    const auto& s = scene_for(static_cast<int>(state.range(0)), 9);
    const auto hyps = linspace_disparities(s.meta.disparity_min, s.meta.disparity_max,
                                           static_cast<int>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_epi_level(s.field, hyps, EpiParams{}, 0));
    }
}

void bm_epi_fine_to_coarse(benchmark::State& state) {
    const auto& s = scene_for(static_cast<int>(state.range(0)), 9);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fine_to_coarse(s.field, s.meta, EpiParams{}));
    }
}

void bm_energy_refine(benchmark::State& state) {
    const auto& s = scene_for(static_cast<int>(state.range(0)), 3);
    DisparityMap init(s.field.width(), s.field.height());
    for (int y = 0; y < s.field.height(); ++y) {
        for (int x = 0; x < s.field.width(); ++x) {
            init.set(y, x, 0.5);
        }
    }
    EnergyParams params;
    params.max_iters = 10;
    for (auto _ : state) {
        benchmark::DoNotOptimize(energy_refine(init, s.field, params));
    }
}

BENCHMARK(bm_lsg)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_cost_volume)->Args({64, 11})->Args({128, 11})->Unit(benchmark::kMillisecond);
BENCHMARK(bm_sweep)->Args({64, 11})->Args({128, 11})->Args({128, 25})->Unit(benchmark::kMillisecond);
BENCHMARK(bm_epi_level0)->Args({64, 11})->Args({128, 25})->Unit(benchmark::kMillisecond);
BENCHMARK(bm_epi_fine_to_coarse)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_energy_refine)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
