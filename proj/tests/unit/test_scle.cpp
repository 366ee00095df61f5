#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "scribkit/distance.hpp"
#include "scribkit/error.hpp"
#include "scribkit/expansion.hpp"
#include "scribkit/graph_cut.hpp"
#include "scribkit/maxflow.hpp"
#include "scribkit/scle.hpp"
#include "scribkit/skeleton.hpp"
#include "scribkit/slic.hpp"
#include "scribkit/synth.hpp"
#include "scribkit_oracles/oracles.hpp"

using namespace scribkit;

namespace {
ExpansionConfig small_buffer() {
    ExpansionConfig cfg;
    cfg.b1 = 2;
    cfg.b2 = 4;
    return cfg;
}
}  // namespace

TEST_CASE("statistic expansion piecewise") {
    DistanceMap d(1, 7, {1.0, 3.0, 5.0, 2.0, 4.0, 0.0, 4.0000001});
    const auto y = statistic_expand(d, small_buffer());
    CHECK(y.storage() == std::vector<double>{1, 0.5, 0, 1, 0.5, 1, 0});
}

TEST_CASE("statistic expansion marks every scribble pixel foreground") {
    Rng rng(41);
    for (int k = 0; k < 20; ++k) {
        const auto s = oracle::random_scribble(rng, 32, 32);
        const auto y = statistic_expand(distance_transform(s), ExpansionConfig{});
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i]) {
                CHECK(y[i] == 1.0);
            }
        }
        CHECK(y == oracle::brute_force_statistic_label(s, 4, 8));
    }
}

TEST_CASE("config validation") {
    ExpansionConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.b1 = 8;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg = {};
    cfg.n_slic = 1;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg = {};
    cfg.gc_sigma = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg = {};
    cfg.slic_iterations = 0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
}

TEST_CASE("stride") {
    CHECK(compute_stride(16, 16, 2, true) == 128);
    CHECK(compute_stride(512, 512, 1024, false) == 11);
    CHECK(compute_stride(512, 512, 1024, true) == 5793);
    CHECK(compute_stride(2, 2, 1024, false) == 1);
    CHECK(background_interval(512, 512, 1024, false) == 16.0);
    CHECK(background_interval(512, 512, 1024, true) == 256.0);
}

TEST_CASE("background seeds") {
    ExpansionConfig cfg;
    BinaryMask s(512, 512);
    s(0, 0) = 1;
    const auto seeds = sample_background_seeds(s, distance_transform(s), cfg);
    CHECK(grid_coordinates(512, 16.0).size() == 32);
    CHECK(seeds.size() <= 1024);
    CHECK(seeds.size() >= 1000);

    // everything inside the buffer
    BinaryMask full(10, 10, std::vector<std::uint8_t>(100, 1));
    CHECK(sample_background_seeds(full, distance_transform(full), cfg).empty());

    // candidate at exactly (b1+b2)/2 is discarded
    cfg = small_buffer();
    cfg.n_slic = 2;
    BinaryMask one(6, 6);
    one(2, 5) = 1;  // the only candidate, (2,2), sits at DIS = 3
    DistanceMap d = distance_transform(one);
    REQUIRE(grid_coordinates(6, background_interval(6, 6, 2, false)) == std::vector<int>{2});
    CHECK(d(2, 2) == 3.0);
    CHECK(sample_background_seeds(one, d, cfg).empty());
    one(2, 5) = 0;
    one(5, 5) = 1;  // DIS(2,2) = sqrt(18) > 3
    CHECK(sample_background_seeds(one, distance_transform(one), cfg) == std::vector<Pixel>{{2, 2}});
}

TEST_CASE("seed invariants on random scribbles") {
    Rng rng(42);
    for (int k = 0; k < 20; ++k) {
        const auto s = skeletonize(oracle::random_blobs(rng, 64, 64, 3));
        if (count_nonzero(s) == 0) {
            continue;
        }
        ExpansionConfig cfg;
        cfg.n_slic = 64;
        const auto d = distance_transform(s);
        for (const auto& p : sample_foreground_seeds(s, cfg)) {
            CHECK(s(p.row, p.col) == 1);
        }
        for (const auto& p : sample_background_seeds(s, d, cfg)) {
            CHECK(d(p.row, p.col) > (cfg.b1 + cfg.b2) / 2);
        }
        const auto fg = sample_foreground_seeds(s, cfg);
        CHECK(std::set<Pixel>(fg.begin(), fg.end()).size() == fg.size());
    }
}

TEST_CASE("merge labels") {
    TriLabel ys(1, 6, {0, 0, 0.5, 0.5, 1, 1});
    TriLabel yc(1, 6, {1, 0, 0, 1, 0, 1});
    CHECK(merge_labels(ys, yc).storage() == std::vector<double>{0.5, 0, 0.5, 0.5, 1, 1});
    CHECK_THROWS_AS(merge_labels(TriLabel(2, 2), TriLabel(2, 3)), ShapeError);
    CHECK_THROWS(merge_labels(TriLabel(1, 1), TriLabel(1, 1, 0.5)));

    Rng rng(43);
    for (int k = 0; k < 30; ++k) {
        const auto a = oracle::random_trilabel(rng, 9, 9);
        const auto c = to_trilabel(oracle::random_mask(rng, 9, 9, 0.5));
        const auto y = merge_labels(a, c);
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (a[i] == 1.0) {
                CHECK(y[i] == 1.0);
            }
            if (a[i] == 0.5) {
                CHECK(y[i] == 0.5);
            }
        }
    }
}

TEST_CASE("slic on uniform image follows the seed grid") {
    RasterImage img(32, 32, 0.4);
    ExpansionConfig cfg;
    cfg.n_slic = 16;
    const auto sp = slic(img, SeedSet{}, cfg);
    REQUIRE(sp.size() == 16);
    for (const auto& cl : sp.clusters) {
        CHECK(cl.pixel_count >= 48);
        CHECK(cl.pixel_count <= 84);
        const double gr = 4.0 + 8.0 * std::round((cl.row - 4.0) / 8.0);
        const double gc = 4.0 + 8.0 * std::round((cl.col - 4.0) / 8.0);
        CHECK(std::abs(cl.row - gr) <= 1.5);
        CHECK(std::abs(cl.col - gc) <= 1.5);
    }
}

TEST_CASE("slic splits two homogeneous halves") {
    RasterImage img(16, 32);
    for (int r = 0; r < 16; ++r) {
        for (int c = 0; c < 32; ++c) {
            img(r, c, c < 16 ? 0 : 2) = 0.8;
        }
    }
    ExpansionConfig cfg;
    cfg.n_slic = 2;
    SeedSet seeds{{{8, 8}}, {{8, 24}}};
    const auto sp = slic(img, seeds, cfg);
    REQUIRE(sp.size() == 2);
    const int left = sp.labels(0, 0);
    for (int r = 0; r < 16; ++r) {
        for (int c = 0; c < 32; ++c) {
            CHECK((sp.labels(r, c) == left) == (c < 16));
        }
    }
    CHECK(sp.adjacency == std::vector<std::pair<int, int>>{{0, 1}});
}

TEST_CASE("slic needs two centers") {
    ExpansionConfig cfg;
    cfg.n_slic = 2;
    CHECK_THROWS_AS(slic(RasterImage(1, 1), SeedSet{}, cfg), ParameterError);
}

TEST_CASE("min cut chain example") {
    BinaryLabelingProblem p;
    p.cost_foreground = {0, 0.25, 0};
    p.cost_background = {0, 0.75, 0};
    p.edges = {{0, 1, 0.5}, {1, 2, 0.25}};
    p.hard = {1, -1, 0};
    const auto res = solve_min_cut(p);
    CHECK(res.labels == std::vector<std::uint8_t>{1, 1, 0});
    CHECK(res.cut_cost == 0.5);
    CHECK(oracle::exhaustive_min_cut(p).min_energy == 0.5);
}

TEST_CASE("min cut matches enumeration") {
    Rng rng(44);
    for (int k = 0; k < 200; ++k) {
        const auto p = oracle::random_labeling_problem(rng, 18);
        const auto got = solve_min_cut(p);
        const auto ref = oracle::exhaustive_min_cut(p);
        CHECK(got.cut_cost == ref.min_energy);
        CHECK(oracle::labeling_energy(p, got.labels) == ref.min_energy);
    }
}

TEST_CASE("fully seeded problem returns the seeding") {
    BinaryLabelingProblem p;
    p.cost_foreground = {5, 0, 5, 0};
    p.cost_background = {0, 5, 0, 5};
    p.edges = {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}};
    p.hard = {1, 0, 0, 1};
    CHECK(solve_min_cut(p).labels == std::vector<std::uint8_t>{1, 0, 0, 1});
}

TEST_CASE("max flow") {
    MaxFlowGraph g(2);
    g.add_terminal_edges(0, 3, 0);
    g.add_terminal_edges(1, 0, 2);
    g.add_edge(0, 1, 5, 0);
    CHECK(g.solve() == 2.0);
    CHECK(g.in_source_set(0));

    const double inf = std::numeric_limits<double>::infinity();
    MaxFlowGraph h(1);
    h.add_terminal_edges(0, inf, inf);
    CHECK_THROWS_AS(h.solve(), NumericError);
}

TEST_CASE("graph cut respects seeds") {
    Rng rng(45);
    for (int k = 0; k < 10; ++k) {
        const auto img = oracle::random_image(rng, 40, 40);
        const auto s = skeletonize(oracle::random_blobs(rng, 40, 40, 2));
        if (count_nonzero(s) == 0) {
            continue;
        }
        ExpansionConfig cfg = small_buffer();
        cfg.n_slic = 50;
        SeedSet seeds{sample_foreground_seeds(s, cfg), sample_background_seeds(s, distance_transform(s), cfg)};
        if (seeds.background.empty()) {
            continue;
        }
        const auto sp = slic(img, seeds, cfg);
        const auto gc = graph_cut(sp, seeds, cfg);
        for (const auto& p : seeds.foreground) {
            CHECK(gc.content(p.row, p.col) == 1.0);
        }
        std::set<int> fg_clusters;
        for (const auto& p : seeds.foreground) {
            fg_clusters.insert(sp.labels(p.row, p.col));
        }
        for (const auto& p : seeds.background) {
            if (!fg_clusters.count(sp.labels(p.row, p.col))) {
                CHECK(gc.content(p.row, p.col) == 0.0);
            }
        }
        CHECK(gc.sigma > 0.0);
    }
}

TEST_CASE("graph cut without background seeds") {
    RasterImage img(16, 16, 0.5);
    ExpansionConfig cfg;
    cfg.n_slic = 4;
    const auto sp = slic(img, SeedSet{{{8, 8}}, {}}, cfg);
    CHECK_THROWS_AS(graph_cut(sp, SeedSet{{{8, 8}}, {}}, cfg), MissingSeedsError);
}

TEST_CASE("expand labels on a synthetic scene") {
    SceneSpec spec;
    spec.seed = 7;
    spec.height = spec.width = 128;
    spec.n_roads = 2;
    const auto scene = gen_scene(spec);
    const auto s = skeletonize(scene.mask);
    ExpansionConfig cfg;
    cfg.n_slic = 256;
    const auto res = expand_labels(scene.image, s, cfg);
    CHECK_FALSE(res.graph_cut_fallback);
    CHECK_NOTHROW(validate(res.merged));
    CHECK(res.merged == merge_labels(res.statistic, res.content));
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i]) {
            CHECK(res.merged[i] == 1.0);
        }
    }
    CHECK(res.stride == compute_stride(128, 128, 256, false));
    // deterministic
    CHECK(expand_labels(scene.image, s, cfg).merged == res.merged);
}

TEST_CASE("expand labels falls back without background seeds") {
    RasterImage img(8, 8, 0.3);
    BinaryMask s(8, 8);
    for (int c = 0; c < 8; ++c) {
        s(4, c) = 1;
    }
    ExpansionConfig cfg;
    cfg.n_slic = 4;
    const auto res = expand_labels(img, s, cfg);
    CHECK(res.graph_cut_fallback);
    CHECK_FALSE(res.fallback_reason.empty());
    for (std::size_t i = 0; i < res.content.size(); ++i) {
        CHECK(res.content[i] == (res.statistic[i] == 1.0 ? 1.0 : 0.0));
    }
}
