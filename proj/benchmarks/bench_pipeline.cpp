#include <benchmark/benchmark.h>

#include <limits>

#include "scribkit/distance.hpp"
#include "scribkit/expansion.hpp"
#include "scribkit/losses.hpp"
#include "scribkit/maxflow.hpp"
#include "scribkit/mix.hpp"
#include "scribkit/rng.hpp"
#include "scribkit/scle.hpp"
#include "scribkit/skeleton.hpp"
#include "scribkit/slic.hpp"
#include "scribkit/synth.hpp"

using namespace scribkit;

namespace {

Scene scene_of_size(int size, std::uint64_t seed = 5) {
    SceneSpec spec;
    spec.height = spec.width = size;
    spec.seed = seed;
    return gen_scene(spec);
}

void BM_Skeletonize(benchmark::State& st) {
    const auto sc = scene_of_size(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        benchmark::DoNotOptimize(skeletonize(sc.mask));
    }
}
BENCHMARK(BM_Skeletonize)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_DistanceTransform(benchmark::State& st) {
    const auto s = skeletonize(scene_of_size(static_cast<int>(st.range(0))).mask);
    for (auto _ : st) {
        benchmark::DoNotOptimize(distance_transform(s));
    }
    st.SetComplexityN(st.range(0) * st.range(0));
}
BENCHMARK(BM_DistanceTransform)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Slic(benchmark::State& st) {
    const auto sc = scene_of_size(256);
    const auto s = skeletonize(sc.mask);
    ExpansionConfig cfg;
    cfg.n_slic = static_cast<int>(st.range(0));
    SeedSet seeds{sample_foreground_seeds(s, cfg), sample_background_seeds(s, distance_transform(s), cfg)};
    for (auto _ : st) {
        benchmark::DoNotOptimize(slic(sc.image, seeds, cfg));
    }
}
BENCHMARK(BM_Slic)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

// 4-connected grid with random terminal and neighbour capacities.
void BM_MaxFlowGrid(benchmark::State& st) {
    const int side = static_cast<int>(st.range(0));
    for (auto _ : st) {
        st.PauseTiming();
        Rng rng(17);
        MaxFlowGraph g(side * side);
        for (int r = 0; r < side; ++r) {
            for (int c = 0; c < side; ++c) {
                const int v = r * side + c;
                g.add_terminal_edges(v, rng.uniform(), rng.uniform());
                if (c + 1 < side) g.add_edge(v, v + 1, rng.uniform(), rng.uniform());
                if (r + 1 < side) g.add_edge(v, v + side, rng.uniform(), rng.uniform());
            }
        }
        st.ResumeTiming();
        benchmark::DoNotOptimize(g.solve());
    }
}
BENCHMARK(BM_MaxFlowGrid)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_ExpandLabels(benchmark::State& st) {
    const auto sc = scene_of_size(static_cast<int>(st.range(0)));
    const auto s = skeletonize(sc.mask);
    const ExpansionConfig cfg;
    for (auto _ : st) {
        benchmark::DoNotOptimize(expand_labels(sc.image, s, cfg));
    }
}
BENCHMARK(BM_ExpandLabels)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Mix(benchmark::State& st) {
    const auto a = scene_of_size(256, 1), b = scene_of_size(256, 2);
    MixConfig cfg;
    cfg.t = std::numeric_limits<double>::infinity();
    const auto ya = to_trilabel(a.mask), yb = to_trilabel(b.mask);
    for (auto _ : st) {
        benchmark::DoNotOptimize(structure_aware_mix(a.image, b.image, ya, yb, cfg));
    }
}
BENCHMARK(BM_Mix)->Unit(benchmark::kMillisecond);

void BM_LossSuite(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    Rng rng(4);
    TriLabel y1(n, n), y2(n, n);
    PredictionMap p1(n, n), p2(n, n), q1(n, n), q2(n, n);
    for (std::size_t i = 0; i < y1.size(); ++i) {
        y1[i] = 0.5 * rng.integer(0, 2);
        y2[i] = 0.5 * rng.integer(0, 2);
        p1[i] = rng.uniform(0.01, 0.99);
        p2[i] = rng.uniform(0.01, 0.99);
        q1[i] = rng.uniform(0.01, 0.99);
        q2[i] = rng.uniform(0.01, 0.99);
    }
    for (auto _ : st) {
        const auto seg = seg_loss(y1, y2, p1, p2);
        const auto [b12, b21] = mix_predictions(p1, p2, y1, y2, 1);
        const auto inv = invariance_loss(q1, q2, b12, b21);
        benchmark::DoNotOptimize(total_loss({seg.value, seg.value, inv.value, 0.0}, LossWeights{}));
    }
}
BENCHMARK(BM_LossSuite)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
