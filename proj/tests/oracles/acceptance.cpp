#include "scribkit_oracles/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <deque>
#include <limits>
#include <sstream>

#include "scribkit/distance.hpp"
#include "scribkit/expansion.hpp"
#include "scribkit/graph_cut.hpp"
#include "scribkit/losses.hpp"
#include "scribkit/metrics.hpp"
#include "scribkit/mix.hpp"
#include "scribkit/rng.hpp"
#include "scribkit/scle.hpp"
#include "scribkit/skeleton.hpp"
#include "scribkit/slic.hpp"
#include "scribkit/synth.hpp"
#include "scribkit_oracles/oracles.hpp"

namespace scribkit::oracle {
namespace {

using Clock = std::chrono::steady_clock;

int trials(const AcceptanceOptions& o, int full) {
    return std::max(1, static_cast<int>(std::lround(full * o.scale)));
}

bool bitwise_equal(std::span<const double> a, std::span<const double> b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

// ---- individual criteria ----

CriterionResult buffer_oracle(const AcceptanceOptions& o) {
    CriterionResult r{"buffer-oracle", "buffer expansion matches brute-force nearest scribble", false, "", 0};
    const auto t0 = Clock::now();
    const int n = trials(o, 50);
    Rng rng(101);
    ExpansionConfig cfg;
    int mismatched_pixels = 0;
    for (int k = 0; k < n; ++k) {
        const auto s = random_scribble(rng, 64, 64);
        const auto ys = statistic_expand(distance_transform(s), cfg);
        const auto ref = brute_force_statistic_label(s, cfg.b1, cfg.b2);
        for (std::size_t i = 0; i < ys.size(); ++i) {
            mismatched_pixels += ys[i] != ref[i];
        }
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    r.passed = mismatched_pixels == 0 && secs < 10.0;
    r.detail = std::to_string(n) + " scribbles, " + std::to_string(mismatched_pixels) + " mismatched pixels, " +
               fmt(secs) + " s (limit 10 s)";
    return r;
}

CriterionResult merge_table(const AcceptanceOptions&) {
    CriterionResult r{"merge-table", "label merge over all six (y_s, y_c) combinations", false, "", 0};
    const double ys_v[6] = {0, 0, 0.5, 0.5, 1, 1};
    const double yc_v[6] = {1, 0, 0, 1, 0, 1};
    const double expect[6] = {0.5, 0, 0.5, 0.5, 1, 1};
    TriLabel ys(1, 6, std::vector<double>(ys_v, ys_v + 6));
    TriLabel yc(1, 6, std::vector<double>(yc_v, yc_v + 6));
    const auto y = merge_labels(ys, yc);
    int ok = 0;
    for (int i = 0; i < 6; ++i) {
        ok += y[static_cast<std::size_t>(i)] == expect[i];
    }
    r.passed = ok == 6;
    r.detail = std::to_string(ok) + "/6 combinations exact";
    return r;
}

CriterionResult mincut_optimality(const AcceptanceOptions& o) {
    CriterionResult r{"mincut-optimal", "max-flow cut equals exhaustive minimum (<=15 nodes)", false, "", 0};
    const auto t0 = Clock::now();
    const int n = trials(o, 100);
    Rng rng(202);
    int cost_mismatch = 0;
    int energy_mismatch = 0;
    for (int k = 0; k < n; ++k) {
        const auto p = random_labeling_problem(rng, 15);
        const auto got = solve_min_cut(p);
        const auto ref = exhaustive_min_cut(p);
        cost_mismatch += got.cut_cost != ref.min_energy;
        energy_mismatch += labeling_energy(p, got.labels) != ref.min_energy;
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    r.passed = cost_mismatch == 0 && energy_mismatch == 0 && secs < 30.0;
    r.detail = std::to_string(n) + " graphs, cost mismatches " + std::to_string(cost_mismatch) +
               ", labeling-energy mismatches " + std::to_string(energy_mismatch) + ", " + fmt(secs) +
               " s (limit 30 s)";
    return r;
}

// Number of 8-connected components per label.
std::vector<int> components_per_label(const Grid<int>& labels, int k) {
    std::vector<int> comps(static_cast<std::size_t>(k), 0);
    Grid<std::uint8_t> seen(labels.height(), labels.width());
    std::deque<std::pair<int, int>> q;
    for (int r = 0; r < labels.height(); ++r) {
        for (int c = 0; c < labels.width(); ++c) {
            if (seen(r, c)) {
                continue;
            }
            const int l = labels(r, c);
            if (l < 0 || l >= k) {
                continue;
            }
            ++comps[static_cast<std::size_t>(l)];
            seen(r, c) = 1;
            q.emplace_back(r, c);
            while (!q.empty()) {
                const auto [pr, pc] = q.front();
                q.pop_front();
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int nr = pr + dr, nc = pc + dc;
                        if (labels.contains(nr, nc) && !seen(nr, nc) && labels(nr, nc) == l) {
                            seen(nr, nc) = 1;
                            q.emplace_back(nr, nc);
                        }
                    }
                }
            }
        }
    }
    return comps;
}

CriterionResult slic_contract(const AcceptanceOptions& o) {
    CriterionResult r{"slic-contract", "superpixels cover every pixel, are connected, and are deterministic", false,
                      "", 0};
    const int n = trials(o, 20);
    Rng rng(303);
    int uncovered = 0;
    int disconnected = 0;
    int empty_clusters = 0;
    int nondeterministic = 0;
    for (int k = 0; k < n; ++k) {
        const int h = rng.integer(24, 64);
        const int w = rng.integer(24, 64);
        const auto img = random_image(rng, h, w);
        const auto s = random_scribble(rng, h, w);
        ExpansionConfig cfg;
        cfg.b1 = 2;
        cfg.b2 = 4;
        cfg.n_slic = rng.integer(8, 96);
        SeedSet seeds;
        seeds.foreground = sample_foreground_seeds(s, cfg);
        seeds.background = sample_background_seeds(s, distance_transform(s), cfg);
        const auto a = slic(img, seeds, cfg);
        const auto b = slic(img, seeds, cfg);
        const int kc = static_cast<int>(a.size());
        for (std::size_t i = 0; i < a.labels.size(); ++i) {
            uncovered += a.labels[i] < 0 || a.labels[i] >= kc;
        }
        for (int c : components_per_label(a.labels, kc)) {
            disconnected += c > 1;
            empty_clusters += c == 0;
        }
        nondeterministic += !(a.labels == b.labels);
    }
    r.passed = uncovered == 0 && disconnected == 0 && empty_clusters == 0 && nondeterministic == 0;
    r.detail = std::to_string(n) + " images: uncovered " + std::to_string(uncovered) + ", disconnected clusters " +
               std::to_string(disconnected) + ", empty ids " + std::to_string(empty_clusters) +
               ", runs differing " + std::to_string(nondeterministic);
    return r;
}

PredictionMap channel_mean(const RasterImage& x) {
    PredictionMap p(x.height(), x.width());
    for (int r = 0; r < x.height(); ++r) {
        for (int c = 0; c < x.width(); ++c) {
            p(r, c) = (x(r, c, 0) + x(r, c, 1) + x(r, c, 2)) / 3.0;
        }
    }
    return p;
}

CriterionResult commutation(const AcceptanceOptions& o) {
    CriterionResult r{"mix-commutation", "pixelwise segmenter commutes with structure-aware mixing", false, "", 0};
    const int n = trials(o, 20);
    Rng rng(404);
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
        const int h = rng.integer(8, 40);
        const int w = rng.integer(8, 40);
        const auto x1 = random_image(rng, h, w);
        const auto x2 = random_image(rng, h, w);
        const auto y1 = random_trilabel(rng, h, w);
        const auto y2 = random_trilabel(rng, h, w);
        for (std::uint8_t gate : {std::uint8_t{0}, std::uint8_t{1}}) {
            const auto [xm12, xm21] = mix_images(x1, x2, y1, y2, gate);
            const auto [pb12, pb21] = mix_predictions(channel_mean(x1), channel_mean(x2), y1, y2, gate);
            const auto s12 = channel_mean(xm12);
            const auto s21 = channel_mean(xm21);
            for (std::size_t i = 0; i < s12.size(); ++i) {
                worst = std::max({worst, std::abs(s12[i] - pb12[i]), std::abs(s21[i] - pb21[i])});
            }
        }
    }
    r.passed = worst <= 1e-12;
    r.detail = std::to_string(n) + " pairs x both gates, max |diff| " + fmt(worst) + " (limit 1e-12)";
    return r;
}

ColorHistogram random_histogram(Rng& rng, const MixConfig& cfg) {
    ColorHistogram h{cfg.h_bins, cfg.s_bins, cfg.v_bins, {}};
    h.bins.resize(static_cast<std::size_t>(cfg.h_bins * cfg.s_bins * cfg.v_bins));
    const double sparsity = rng.uniform();
    double sum = 0.0;
    for (auto& b : h.bins) {
        b = (rng.uniform() < sparsity ? 0.0 : rng.uniform()) + cfg.epsilon;
        sum += b;
    }
    for (auto& b : h.bins) {
        b /= sum;
    }
    return h;
}

CriterionResult gate_semantics(const AcceptanceOptions& o) {
    CriterionResult r{"gate-semantics", "color gate off returns originals; KL(h,h)=0 and KL>=0", false, "", 0};
    MixConfig cfg;
    // Saturated red vs saturated blue: disjoint hue bins, KL far above t.
    RasterImage x1(16, 16), x2(16, 16);
    for (int rr = 0; rr < 16; ++rr) {
        for (int c = 0; c < 16; ++c) {
            x1(rr, c, 0) = 0.9;
            x2(rr, c, 2) = 0.9;
        }
    }
    Rng rng(505);
    const auto y1 = random_trilabel(rng, 16, 16);
    const auto y2 = random_trilabel(rng, 16, 16);
    const auto m = structure_aware_mix(x1, x2, y1, y2, cfg);
    const bool originals = m.gate == 0 && m.kl_value >= cfg.t && m.x_m_12 == x1 && m.x_m_21 == x2 &&
                           bitwise_equal(m.y_m_12.values(), y1.values()) &&
                           bitwise_equal(m.y_m_21.values(), y2.values());
    const int n = trials(o, 100);
    int self_nonzero = 0;
    int negative = 0;
    double min_kl = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        const auto a = random_histogram(rng, cfg);
        const auto b = random_histogram(rng, cfg);
        self_nonzero += kl_divergence(a, a) != 0.0;
        const double d = kl_divergence(a, b);
        negative += d < 0.0;
        min_kl = std::min(min_kl, d);
    }
    r.passed = originals && self_nonzero == 0 && negative == 0;
    r.detail = "constructed pair KL " + fmt(m.kl_value) + " gate " + std::to_string(m.gate) +
               (originals ? " originals kept" : " outputs differ") + "; " + std::to_string(n) +
               " random pairs: KL(h,h)!=0 " + std::to_string(self_nonzero) + ", KL<0 " + std::to_string(negative) +
               ", min KL " + fmt(min_kl);
    return r;
}

std::vector<double> to_vec(const Grid<double>& g) { return {g.values().begin(), g.values().end()}; }

CriterionResult gradient_checks(const AcceptanceOptions& o) {
    CriterionResult r{"gradient-check", "analytic gradients match central differences (rel err <= 1e-4)", false,
                      "", 0};
    const int n = trials(o, 5);
    Rng rng(606);
    double err_bce = 0.0, err_inv = 0.0, err_adv = 0.0;
    bool stop_grad_zero = true;
    const double floor = 1e-6;
    for (int k = 0; k < n; ++k) {
        // partial BCE
        const auto y = random_trilabel(rng, 8, 8);
        const auto p = random_prediction(rng, 8, 8, 0.05, 0.95);
        const auto bce = partial_bce(y, p);
        const auto fd_bce = central_difference(
            [&](std::span<const double> v) {
                return partial_bce(y, PredictionMap(8, 8, std::vector<double>(v.begin(), v.end()))).value;
            },
            to_vec(p), 1e-6);
        err_bce = std::max(err_bce, max_relative_error(bce.grad, fd_bce, floor));

        // invariance, differentiated w.r.t. p_m only
        const auto pm12 = random_prediction(rng, 8, 8);
        const auto pm21 = random_prediction(rng, 8, 8);
        const auto pb12 = random_prediction(rng, 8, 8);
        const auto pb21 = random_prediction(rng, 8, 8);
        const auto inv = invariance_loss(pm12, pm21, pb12, pb21);
        std::vector<double> x = to_vec(pm12);
        const auto tail = to_vec(pm21);
        x.insert(x.end(), tail.begin(), tail.end());
        const auto fd_inv = central_difference(
            [&](std::span<const double> v) {
                PredictionMap a(8, 8, std::vector<double>(v.begin(), v.begin() + 64));
                PredictionMap b(8, 8, std::vector<double>(v.begin() + 64, v.end()));
                return invariance_loss(a, b, pb12, pb21).value;
            },
            x, 1e-6);
        std::vector<double> an = inv.grad_pm_12;
        an.insert(an.end(), inv.grad_pm_21.begin(), inv.grad_pm_21.end());
        err_inv = std::max(err_inv, max_relative_error(an, fd_inv, floor));
        for (double g : inv.grad_pbar_12) {
            stop_grad_zero = stop_grad_zero && g == 0.0;
        }
        for (double g : inv.grad_pbar_21) {
            stop_grad_zero = stop_grad_zero && g == 0.0;
        }
        stop_grad_zero = stop_grad_zero && inv.grad_pbar_12.size() == 64 && inv.grad_pbar_21.size() == 64;
        const auto cos = cosine_loss(pm12.values(), pb12.values());
        stop_grad_zero = stop_grad_zero && cos.grad.size() == 64;

        // patch adversarial loss on an 8x8 patch grid
        PatchScoreMap s{8, std::vector<double>(128)};
        for (int h = 0; h < 8; ++h) {
            for (int w = 0; w < 8; ++w) {
                const double f = rng.uniform(0.05, 0.95);
                s.at(h, w, 0) = f;
                s.at(h, w, 1) = 1.0 - f;
            }
        }
        for (auto flag : {RealFakeFlag::kFake, RealFakeFlag::kReal}) {
            const auto adv = patch_adv_loss(s, flag);
            // step kept well inside the 1e-6 normalization tolerance
            const auto fd_adv = central_difference(
                [&](std::span<const double> v) {
                    return patch_adv_loss(PatchScoreMap{8, std::vector<double>(v.begin(), v.end())}, flag).value;
                },
                s.data, 1e-7);
            err_adv = std::max(err_adv, max_relative_error(adv.grad, fd_adv, floor));
        }
    }
    const double worst = std::max({err_bce, err_inv, err_adv});
    r.passed = worst <= 1e-4 && stop_grad_zero;
    r.detail = "bce " + fmt(err_bce) + ", invariance " + fmt(err_inv) + ", adversarial " + fmt(err_adv) +
               "; stop-gradient grads " + (stop_grad_zero ? "exactly zero" : "NONZERO");
    return r;
}

CriterionResult uncertain_neutrality(const AcceptanceOptions& o) {
    CriterionResult r{"uncertain-neutral", "perturbing uncertain pixels leaves segmentation loss and p_T unchanged",
                      false, "", 0};
    const int n = trials(o, 20);
    Rng rng(707);
    int changed = 0;
    for (int k = 0; k < n; ++k) {
        const int h = rng.integer(4, 24);
        const int w = rng.integer(4, 24);
        const auto y1 = random_trilabel(rng, h, w);
        const auto y2 = random_trilabel(rng, h, w);
        const auto p1 = random_prediction(rng, h, w, 0.0, 1.0);
        const auto p2 = random_prediction(rng, h, w, 0.0, 1.0);
        auto q1 = p1;
        auto q2 = p2;
        for (std::size_t i = 0; i < q1.size(); ++i) {
            if (y1[i] == 0.5) {
                q1[i] = rng.uniform();
            }
            if (y2[i] == 0.5) {
                q2[i] = rng.uniform();
            }
        }
        const double a = seg_loss(y1, y2, p1, p2).value;
        const double b = seg_loss(y1, y2, q1, q2).value;
        changed += std::memcmp(&a, &b, sizeof(double)) != 0;
        const auto ft_a = apply_topology_filter(p1, y1);
        const auto ft_b = apply_topology_filter(q1, y1);
        changed += !bitwise_equal(ft_a.p_t.values(), ft_b.p_t.values());
    }
    r.passed = changed == 0;
    r.detail = std::to_string(n) + " fixtures, " + std::to_string(changed) + " bitwise changes";
    return r;
}

CriterionResult total_identity(const AcceptanceOptions& o) {
    CriterionResult r{"total-identity", "reported total equals weighted sum with default weights 0.1/0.1", false,
                      "", 0};
    const int n = trials(o, 100);
    Rng rng(808);
    const LossWeights w;
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
        LossComponents c{rng.uniform(0, 3), rng.uniform(0, 3), rng.uniform(0, 2), rng.uniform(0, 3)};
        const auto rep = total_loss(c, w);
        const double recomputed = rep.l_seg + rep.l_seg_m + 0.1 * rep.l_inv + 0.1 * rep.l_cd;
        worst = std::max(worst, std::abs(rep.total - recomputed));
    }
    const auto fixed = total_loss({1.0, 0.8, 0.5, 0.3}, w);
    const bool defaults = w.lambda1 == 0.1 && w.lambda2 == 0.1;
    const bool example = std::abs(fixed.total - 1.88) <= 1e-12;
    r.passed = worst <= 1e-12 && defaults && example;
    r.detail = std::to_string(n) + " reports, max |diff| " + fmt(worst) + "; defaults " +
               (defaults ? "0.1/0.1" : "WRONG") + "; (1,0.8,0.5,0.3) -> " + fmt(fixed.total);
    return r;
}

CriterionResult metrics_oracle(const AcceptanceOptions& o) {
    CriterionResult r{"metrics-oracle", "evaluate matches brute-force counts; iou <= f1", false, "", 0};
    const int n = trials(o, 50);
    Rng rng(909);
    int mismatch = 0;
    int order_violations = 0;
    for (int k = 0; k < n; ++k) {
        const int h = rng.integer(1, 48);
        const int w = rng.integer(1, 48);
        const auto pred = random_mask(rng, h, w, rng.uniform());
        const auto gt = random_mask(rng, h, w, rng.uniform());
        const auto ev = evaluate(pred, gt);
        mismatch += !(ev.counts == count_confusion(pred, gt));
        order_violations += ev.metrics.iou > ev.metrics.f1;
    }
    r.passed = mismatch == 0 && order_violations == 0;
    r.detail = std::to_string(n) + " pairs, count mismatches " + std::to_string(mismatch) + ", iou>f1 " +
               std::to_string(order_violations);
    return r;
}

CriterionResult scle_quality(const AcceptanceOptions& o) {
    CriterionResult r{"scle-quality", "synthetic scenes: pseudo-label fg precision >= 0.90, recall >= 0.60, <= 2 s",
                      false, "", 0};
    const int n = trials(o, 20);
    ExpansionConfig cfg;
    ConfusionCounts total, total_c, total_s;
    double worst_secs = 0.0;
    double min_precision = 1.0;
    int fallbacks = 0;
    for (int k = 0; k < n; ++k) {
        SceneSpec spec;
        spec.seed = scene_seed(2024, k);
        spec.width_min = 3.0;
        spec.width_max = 2.0 * cfg.b1;
        const auto scene = gen_scene(spec);
        const auto t0 = Clock::now();
        const auto scribble = skeletonize(scene.mask);
        const auto res = expand_labels(scene.image, scribble, cfg);
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        worst_secs = std::max(worst_secs, secs);
        fallbacks += res.graph_cut_fallback;
        BinaryMask fg(res.merged.height(), res.merged.width());
        for (std::size_t i = 0; i < fg.size(); ++i) {
            fg[i] = res.merged[i] == 1.0;
        }
        BinaryMask fg_c(fg.height(), fg.width()), fg_s(fg.height(), fg.width());
        for (std::size_t i = 0; i < fg.size(); ++i) {
            fg_c[i] = res.content[i] == 1.0;
            fg_s[i] = res.statistic[i] == 1.0;
        }
        total_c += count_confusion(fg_c, scene.mask);
        total_s += count_confusion(fg_s, scene.mask);
        const auto c = count_confusion(fg, scene.mask);
        total += c;
        min_precision = std::min(min_precision, metrics_from_counts(c).precision);
    }
    const auto m = metrics_from_counts(total);
    r.passed = m.precision >= 0.90 && m.recall >= 0.60 && worst_secs <= 2.0;
    r.detail = std::to_string(n) + " scenes: precision " + fmt(m.precision) + " (worst scene " + fmt(min_precision) +
               "), recall " + fmt(m.recall) + ", slowest " + fmt(worst_secs) + " s, graph-cut fallbacks " +
               std::to_string(fallbacks) + "; diagnostics: y_s==1 P/R " +
               fmt(metrics_from_counts(total_s).precision) + "/" + fmt(metrics_from_counts(total_s).recall) +
               ", y_c==1 P/R " + fmt(metrics_from_counts(total_c).precision) + "/" +
               fmt(metrics_from_counts(total_c).recall);
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result) {
    using Fn = CriterionResult (*)(const AcceptanceOptions&);
    const std::pair<const char*, Fn> all[] = {
        {"buffer-oracle", buffer_oracle},       {"merge-table", merge_table},
        {"mincut-optimal", mincut_optimality},  {"slic-contract", slic_contract},
        {"mix-commutation", commutation},       {"gate-semantics", gate_semantics},
        {"gradient-check", gradient_checks},    {"uncertain-neutral", uncertain_neutrality},
        {"total-identity", total_identity},     {"metrics-oracle", metrics_oracle},
        {"scle-quality", scle_quality},
    };
    std::vector<CriterionResult> out;
    for (const auto& [id, fn] : all) {
        if (!opts.filter.empty() && std::string(id).find(opts.filter) == std::string::npos) {
            continue;
        }
        const auto t0 = Clock::now();
        CriterionResult res;
        try {
            res = fn(opts);
        } catch (const std::exception& e) {
            res.id = id;
            res.title = id;
            res.passed = false;
            res.detail = std::string("threw: ") + e.what();
        }
        res.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        if (on_result) {
            on_result(res);
        }
        out.push_back(std::move(res));
    }
    return out;
}

std::string format_result(const CriterionResult& r) {
    return std::string(r.passed ? "PASS" : "FAIL") + "  " + r.id + "  " + r.title + "  [" + r.detail + "]";
}

}  // namespace scribkit::oracle
