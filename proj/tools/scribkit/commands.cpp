#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "scribkit/error.hpp"
#include "scribkit/losses.hpp"
#include "scribkit/metrics.hpp"
#include "scribkit/mix.hpp"
#include "scribkit/overlay.hpp"
#include "scribkit/png_io.hpp"
#include "scribkit/rng.hpp"
#include "scribkit/scle.hpp"
#include "scribkit/skeleton.hpp"
#include "scribkit/synth.hpp"
#include "scribkit/tensor_io.hpp"
#include "scribkit_oracles/acceptance.hpp"

namespace scribkit::cli {
namespace {

const std::vector<std::string> kPng = {".png"};

std::string stem_of(const fs::path& p) { return p.stem().string(); }

fs::path require_file(const fs::path& p, const std::string& what) {
    if (!fs::is_regular_file(p)) {
        throw IoError(what + " " + p.string() + " not found");
    }
    return p;
}

struct LabelCounts {
    std::size_t background = 0, uncertain = 0, foreground = 0;
};

LabelCounts count_labels(const TriLabel& y) {
    LabelCounts c;
    for (double v : y.values()) {
        if (v == TriLabel::kForeground) {
            ++c.foreground;
        } else if (v == TriLabel::kUncertain) {
            ++c.uncertain;
        } else {
            ++c.background;
        }
    }
    return c;
}

json to_json(const LabelCounts& c) {
    return {{"background", c.background}, {"uncertain", c.uncertain}, {"foreground", c.foreground}};
}

json to_json(const ConfusionCounts& c) { return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}}; }

json to_json(const MetricReport& m) {
    json j{{"iou", m.iou}, {"f1", m.f1}, {"precision", m.precision}, {"recall", m.recall}};
    json undefined = json::array();
    if (m.iou_undefined) undefined.push_back("iou");
    if (m.precision_undefined) undefined.push_back("precision");
    if (m.recall_undefined) undefined.push_back("recall");
    if (!undefined.empty()) {
        j["undefined"] = undefined;
    }
    return j;
}

// Prediction maps are TensorBlobs (H x W or H x W x 1) or 8-bit PNGs scaled to [0,1].
fs::path find_prediction(const fs::path& dir, const std::string& name) {
    for (const char* ext : {".rtb", ".png"}) {
        const auto p = dir / (name + ext);
        if (fs::is_regular_file(p)) {
            return p;
        }
    }
    throw IoError("no prediction " + name + ".rtb or " + name + ".png in " + dir.string());
}

PredictionMap load_prediction(const fs::path& p) {
    if (p.extension() == ".rtb") {
        return to_prediction(read_tensor(p));
    }
    const auto g = read_png_gray(p);
    PredictionMap m(g.height(), g.width());
    for (std::size_t i = 0; i < g.size(); ++i) {
        m[i] = g[i] / 255.0;
    }
    return m;
}

LossWeights parse_weights(const std::string& text, const LossWeights& defaults) {
    LossWeights w = defaults;
    if (text.empty()) {
        return w;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw ParameterError("--weights: expected key=value, got \"" + item + "\"");
        }
        const std::string key = item.substr(0, eq);
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (const std::exception&) {
            throw ParameterError("--weights: bad number in \"" + item + "\"");
        }
        if (key == "l1" || key == "lambda1") {
            w.lambda1 = value;
        } else if (key == "l2" || key == "lambda2") {
            w.lambda2 = value;
        } else {
            throw ParameterError("--weights: unknown key \"" + key + "\" (use l1, l2)");
        }
    }
    w.validate();
    return w;
}

// Accumulates gradients of the reported (averaged) total per named input.
class GradientSink {
public:
    void add(const std::string& name, int h, int w, const std::vector<double>& g, double scale) {
        auto& e = maps_[name];
        if (e.grad.empty()) {
            e.h = h;
            e.w = w;
            e.grad.assign(g.size(), 0.0);
        }
        for (std::size_t i = 0; i < g.size(); ++i) {
            e.grad[i] += scale * g[i];
        }
    }
    void add_scores(const std::string& name, int n, const std::vector<double>& g, double scale) {
        add(name, n, n, g, scale);
        maps_[name].scores = true;
    }
    void write(const fs::path& dir, Context& ctx) const {
        ensure_dir(dir);
        for (const auto& [name, e] : maps_) {
            Tensor t;
            t.dims = {static_cast<std::uint32_t>(e.h), static_cast<std::uint32_t>(e.w)};
            if (e.scores) {
                t.dims.push_back(2);
            }
            t.data.assign(e.grad.begin(), e.grad.end());
            const auto path = dir / (name + ".grad.rtb");
            write_tensor(path, t);
            ctx.outputs.push_back(path);
        }
    }

private:
    struct Entry {
        int h = 0, w = 0;
        bool scores = false;
        std::vector<double> grad;
    };
    std::map<std::string, Entry> maps_;
};

struct Sample {
    std::string name;
    PredictionMap p;
    TriLabel y;
};

// Discriminator terms for one prediction: <name>.disc.rtb scores D(p_T) (fake),
// <name>.disc_real.rtb scores D(y_T) (real). Returns the mean of the terms found.
std::optional<double> discriminator_term(const fs::path& pred_dir, const std::string& name, double scale,
                                         GradientSink* sink, Context& ctx) {
    struct Term {
        const char* suffix;
        RealFakeFlag flag;
    };
    std::vector<std::pair<std::string, LossValue>> found;
    std::vector<int> sizes;
    for (const Term t : {Term{".disc", RealFakeFlag::kFake}, Term{".disc_real", RealFakeFlag::kReal}}) {
        const auto path = pred_dir / (name + t.suffix + ".rtb");
        if (!fs::is_regular_file(path)) {
            continue;
        }
        ctx.inputs.push_back(path);
        const auto scores = to_patch_scores(read_tensor(path));
        found.emplace_back(name + t.suffix, patch_adv_loss(scores, t.flag));
        sizes.push_back(scores.n);
    }
    if (found.empty()) {
        return std::nullopt;
    }
    double sum = 0.0;
    const double share = 1.0 / static_cast<double>(found.size());
    for (std::size_t k = 0; k < found.size(); ++k) {
        sum += found[k].second.value;
        if (sink) {
            sink->add_scores(found[k].first, sizes[k], found[k].second.grad, scale * share);
        }
    }
    return sum * share;
}

Sample load_sample(const fs::path& pred_dir, const fs::path& label_path, const std::string& name, Context& ctx) {
    const auto pp = find_prediction(pred_dir, name);
    ctx.inputs.push_back(pp);
    ctx.inputs.push_back(label_path);
    Sample s{name, load_prediction(pp), read_trilabel(label_path)};
    require_same_shape(s.p, s.y, "prediction " + name + " vs its label");
    return s;
}

json loss_json(const LossReport& r) {
    return {{"l_seg", r.l_seg}, {"l_seg_m", r.l_seg_m}, {"l_inv", r.l_inv}, {"l_cd", r.l_cd}, {"total", r.total}};
}

}  // namespace

// ---------------------------------------------------------------------------

void run_make_scribbles(const MakeScribblesArgs& a, Context& ctx) {
    const auto masks = list_files(a.masks, kPng);
    if (masks.empty()) {
        throw IoError("no PNG masks in " + a.masks.string());
    }
    ensure_dir(a.out);
    std::vector<json> stats(masks.size());
    parallel_for(masks.size(), ctx.jobs, [&](std::size_t i) {
        const auto mask = read_mask(masks[i]);
        const auto s = skeletonize(mask);
        write_mask(a.out / masks[i].filename(), s);
        const auto kp = detect_keypoints(s);
        stats[i] = {{"id", stem_of(masks[i])},
                    {"mask_pixels", count_nonzero(mask)},
                    {"scribble_pixels", count_nonzero(s)},
                    {"intersections", kp.intersections.size()},
                    {"endpoints", kp.endpoints.size()}};
    });
    for (const auto& m : masks) {
        ctx.inputs.push_back(m);
        ctx.outputs.push_back(a.out / m.filename());
    }
    write_json(a.out / "scribbles.json", json{{"scribbles", stats}});
    info(ctx, "make-scribbles: " + std::to_string(masks.size()) + " scribbles -> " + a.out.string());
}

void run_expand(const ExpandArgs& a, Context& ctx) {
    const auto images = list_files(a.images, kPng);
    if (images.empty()) {
        throw IoError("no PNG images in " + a.images.string());
    }
    require_dir(a.scribbles, "scribble");
    std::vector<fs::path> scribbles;
    for (const auto& img : images) {
        scribbles.push_back(require_file(a.scribbles / img.filename(), "scribble for " + stem_of(img)));
    }
    for (const char* sub : {"ys", "yc", "labels", "stats"}) {
        ensure_dir(a.out / sub);
    }
    const ExpansionConfig& cfg = ctx.config.expansion;
    cfg.validate();
    std::vector<int> fallbacks(images.size(), 0);
    parallel_for(images.size(), ctx.jobs, [&](std::size_t i) {
        const auto img = read_png_rgb(images[i]);
        const auto s = read_mask(scribbles[i]);
        require_same_shape(img, s, "image vs scribble " + stem_of(images[i]));
        const auto r = expand_labels(img, s, cfg);
        const auto name = images[i].filename();
        write_trilabel(a.out / "ys" / name, r.statistic);
        write_trilabel(a.out / "yc" / name, r.content);
        write_trilabel(a.out / "labels" / name, r.merged);
        fallbacks[i] = r.graph_cut_fallback;
        std::size_t pixels_sum = 0;
        for (const auto& c : r.superpixels.clusters) {
            pixels_sum += c.pixel_count;
        }
        const json stats{
            {"id", stem_of(images[i])},
            {"height", img.height()},
            {"width", img.width()},
            {"stride", r.stride},
            {"scribble_pixels", count_nonzero(s)},
            {"keypoints", {{"intersections", r.keypoints.intersections.size()},
                           {"endpoints", r.keypoints.endpoints.size()}}},
            {"seeds", {{"foreground", r.seeds.foreground.size()}, {"background", r.seeds.background.size()}}},
            {"superpixels",
             {{"count", r.superpixels.size()},
              {"initial_centers", r.superpixels.initial_centers},
              {"adjacent_pairs", r.superpixels.adjacency.size()},
              {"mean_pixels", r.superpixels.size() ? static_cast<double>(pixels_sum) / r.superpixels.size() : 0.0}}},
            {"graph_cut",
             {{"cut_cost", r.cut_cost},
              {"sigma", r.sigma},
              {"fallback", r.graph_cut_fallback},
              {"fallback_reason", r.fallback_reason}}},
            {"labels",
             {{"ys", to_json(count_labels(r.statistic))},
              {"yc", to_json(count_labels(r.content))},
              {"y", to_json(count_labels(r.merged))}}},
        };
        write_json(a.out / "stats" / (stem_of(images[i]) + ".json"), stats);
    });
    int n_fallback = 0;
    for (std::size_t i = 0; i < images.size(); ++i) {
        ctx.inputs.push_back(images[i]);
        ctx.inputs.push_back(scribbles[i]);
        for (const char* sub : {"ys", "yc", "labels"}) {
            ctx.outputs.push_back(a.out / sub / images[i].filename());
        }
        n_fallback += fallbacks[i];
    }
    info(ctx, "expand: " + std::to_string(images.size()) + " images, " + std::to_string(n_fallback) +
                  " graph-cut fallbacks -> " + a.out.string());
}

void run_mix(const MixArgs& a, Context& ctx) {
    const auto labels = list_files(a.labels, kPng);
    std::vector<std::string> ids;
    for (const auto& l : labels) {
        ids.push_back(stem_of(l));
    }
    const std::set<std::string> known(ids.begin(), ids.end());

    std::vector<std::pair<std::string, std::string>> pairs;
    json source;
    if (a.pairs.rfind("random:", 0) == 0) {
        std::uint64_t seed = 0;
        try {
            std::size_t used = 0;
            seed = std::stoull(a.pairs.substr(7), &used);
            if (used != a.pairs.size() - 7) {
                throw std::invalid_argument("trailing");
            }
        } catch (const std::exception&) {
            throw ParameterError("--pairs random:SEED needs an unsigned integer seed");
        }
        if (ids.size() < 2) {
            throw ParameterError("--pairs random: needs at least two labeled images");
        }
        Rng rng(seed, 4);
        auto order = ids;
        for (std::size_t i = order.size() - 1; i > 0; --i) {
            std::swap(order[i], order[static_cast<std::size_t>(rng.integer(0, static_cast<int>(i)))]);
        }
        for (std::size_t i = 0; i + 1 < order.size(); i += 2) {
            pairs.emplace_back(order[i], order[i + 1]);
        }
        ctx.seeds["pairs"] = seed;
        source = {{"random_seed", seed}};
    } else {
        const fs::path pf = require_file(a.pairs, "pairs file");
        ctx.inputs.push_back(pf);
        json doc = read_json(pf);
        if (doc.is_object() && doc.contains("pairs")) {
            doc = doc["pairs"];
        }
        if (!doc.is_array()) {
            throw FormatError(pf.string() + ": expected an array of pairs");
        }
        for (const auto& p : doc) {
            if (p.is_array() && p.size() == 2 && p[0].is_string() && p[1].is_string()) {
                pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
            } else if (p.is_object() && p.contains("first") && p.contains("second") && p["first"].is_string() &&
                       p["second"].is_string()) {
                pairs.emplace_back(p["first"].get<std::string>(), p["second"].get<std::string>());
            } else {
                throw FormatError(pf.string() + ": each pair must be [\"a\",\"b\"] or {\"first\":..,\"second\":..}");
            }
        }
        source = {{"pairs_file", pf.string()}};
    }
    for (const auto& [x, y] : pairs) {
        for (const auto& id : {x, y}) {
            if (!known.count(id)) {
                throw IoError("pair member \"" + id + "\" has no label in " + a.labels.string());
            }
        }
    }
    for (const char* sub : {"images", "labels", "pairs"}) {
        ensure_dir(a.out / sub);
    }
    const MixConfig& cfg = ctx.config.mix;
    cfg.validate();
    std::vector<json> records(pairs.size());
    parallel_for(pairs.size(), ctx.jobs, [&](std::size_t k) {
        const auto& [ia, ib] = pairs[k];
        const auto x1 = read_png_rgb(require_file(a.images / (ia + ".png"), "image"));
        const auto x2 = read_png_rgb(require_file(a.images / (ib + ".png"), "image"));
        const auto y1 = read_trilabel(a.labels / (ia + ".png"));
        const auto y2 = read_trilabel(a.labels / (ib + ".png"));
        const auto m = structure_aware_mix(x1, x2, y1, y2, cfg);
        char name[32];
        std::snprintf(name, sizeof name, "pair%04zu", k);
        const std::string n = name;
        write_png_rgb(a.out / "images" / (n + "_12.png"), m.x_m_12);
        write_png_rgb(a.out / "images" / (n + "_21.png"), m.x_m_21);
        write_trilabel(a.out / "labels" / (n + "_12.png"), m.y_m_12);
        write_trilabel(a.out / "labels" / (n + "_21.png"), m.y_m_21);
        records[k] = {{"pair", n}, {"first", ia}, {"second", ib}, {"gate", m.gate}, {"kl_value", m.kl_value}};
        write_json(a.out / "pairs" / (n + ".json"), records[k]);
    });
    int open = 0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        for (const auto& id : {pairs[k].first, pairs[k].second}) {
            ctx.inputs.push_back(a.images / (id + ".png"));
            ctx.inputs.push_back(a.labels / (id + ".png"));
        }
        const std::string n = records[k]["pair"];
        for (const char* side : {"_12.png", "_21.png"}) {
            ctx.outputs.push_back(a.out / "images" / (n + side));
            ctx.outputs.push_back(a.out / "labels" / (n + side));
        }
        open += records[k]["gate"].get<int>();
    }
    write_json(a.out / "manifest.json",
               json{{"source", source}, {"t", std::isinf(cfg.t) ? json("inf") : json(cfg.t)}, {"pairs", records}});
    info(ctx, "mix: " + std::to_string(pairs.size()) + " pairs, " + std::to_string(open) + " mixed -> " +
                  a.out.string());
}

void run_loss_eval(const LossEvalArgs& a, Context& ctx) {
    const LossWeights weights = parse_weights(a.weights, ctx.config.loss);
    require_dir(a.pred, "prediction");
    require_dir(a.labels, "label");
    GradientSink sink;
    GradientSink* gs = a.grads.empty() ? nullptr : &sink;
    json per = json::array();
    json warnings = json::array();
    LossComponents mean;
    bool any_cd = false;

    auto warn_support = [&](const std::string& name, const LossValue& v) {
        if (v.no_support) {
            warnings.push_back(name + ": no certain pixels, partial BCE is 0");
        }
    };

    if (!a.mixed.empty()) {
        const auto manifest_path = require_file(a.mixed / "manifest.json", "mix manifest");
        ctx.inputs.push_back(manifest_path);
        const json manifest = read_json(manifest_path);
        if (!manifest.contains("pairs") || !manifest["pairs"].is_array() || manifest["pairs"].empty()) {
            throw FormatError(manifest_path.string() + ": no pairs");
        }
        const double scale = 1.0 / static_cast<double>(manifest["pairs"].size());
        for (const auto& rec : manifest["pairs"]) {
            const std::string pn = rec.at("pair"), ia = rec.at("first"), ib = rec.at("second");
            const auto gate = static_cast<std::uint8_t>(rec.at("gate").get<int>());
            const auto s1 = load_sample(a.pred, a.labels / (ia + ".png"), ia, ctx);
            const auto s2 = load_sample(a.pred, a.labels / (ib + ".png"), ib, ctx);
            const auto m12 = load_sample(a.pred, a.mixed / "labels" / (pn + "_12.png"), pn + "_12", ctx);
            const auto m21 = load_sample(a.pred, a.mixed / "labels" / (pn + "_21.png"), pn + "_21", ctx);

            const auto seg = seg_loss(s1.y, s2.y, s1.p, s2.p);
            const auto seg_m = seg_loss(m12.y, m21.y, m12.p, m21.p);
            for (const auto* s : {&s1, &s2, &m12, &m21}) {
                warn_support(s->name, partial_bce(s->y, s->p));
            }
            const auto [pbar12, pbar21] = mix_predictions(s1.p, s2.p, s1.y, s2.y, gate);
            const auto inv = invariance_loss(m12.p, m21.p, pbar12, pbar21);

            double cd_sum = 0.0;
            int cd_n = 0;
            std::vector<std::string> with_cd;
            for (const auto* s : {&s1, &s2, &m12, &m21}) {
                if (fs::is_regular_file(a.pred / (s->name + ".disc.rtb")) ||
                    fs::is_regular_file(a.pred / (s->name + ".disc_real.rtb"))) {
                    with_cd.push_back(s->name);
                }
            }
            for (const auto& name : with_cd) {
                const double share = 1.0 / static_cast<double>(with_cd.size());
                cd_sum += *discriminator_term(a.pred, name, scale * weights.lambda2 * share, gs, ctx);
                ++cd_n;
            }
            const LossComponents c{seg.value, seg_m.value, inv.value, cd_n ? cd_sum / cd_n : 0.0};
            any_cd = any_cd || cd_n > 0;
            const auto rep = total_loss(c, weights);
            mean.l_seg += scale * c.l_seg;
            mean.l_seg_m += scale * c.l_seg_m;
            mean.l_inv += scale * c.l_inv;
            mean.l_cd += scale * c.l_cd;

            if (gs) {
                const int h1 = s1.p.height(), w1 = s1.p.width();
                gs->add(ia, h1, w1, seg.grad_first, scale);
                gs->add(ib, s2.p.height(), s2.p.width(), seg.grad_second, scale);
                gs->add(m12.name, m12.p.height(), m12.p.width(), seg_m.grad_first, scale);
                gs->add(m21.name, m21.p.height(), m21.p.width(), seg_m.grad_second, scale);
                gs->add(m12.name, m12.p.height(), m12.p.width(), inv.grad_pm_12, scale * weights.lambda1);
                gs->add(m21.name, m21.p.height(), m21.p.width(), inv.grad_pm_21, scale * weights.lambda1);
            }
            json entry = loss_json(rep);
            entry["pair"] = pn;
            entry["first"] = ia;
            entry["second"] = ib;
            entry["gate"] = gate;
            entry["discriminator_inputs"] = with_cd;
            per.push_back(entry);
        }
    } else {
        // Unmixed evaluation: every prediction with a label contributes to L_seg.
        std::vector<std::string> names;
        for (const auto& l : list_files(a.labels, kPng)) {
            const auto n = stem_of(l);
            if (fs::is_regular_file(a.pred / (n + ".rtb")) || fs::is_regular_file(a.pred / (n + ".png"))) {
                names.push_back(n);
            }
        }
        if (names.empty()) {
            throw IoError("no predictions in " + a.pred.string() + " match labels in " + a.labels.string());
        }
        const double scale = 1.0 / static_cast<double>(names.size());
        int cd_n = 0;
        double cd_sum = 0.0;
        std::vector<std::string> with_cd;
        for (const auto& n : names) {
            if (fs::is_regular_file(a.pred / (n + ".disc.rtb")) || fs::is_regular_file(a.pred / (n + ".disc_real.rtb"))) {
                with_cd.push_back(n);
            }
        }
        for (const auto& n : names) {
            const auto s = load_sample(a.pred, a.labels / (n + ".png"), n, ctx);
            const auto v = partial_bce(s.y, s.p);
            warn_support(n, v);
            mean.l_seg += scale * v.value;
            if (gs) {
                gs->add(n, s.p.height(), s.p.width(), v.grad, scale);
            }
            per.push_back({{"id", n}, {"l_seg", v.value}});
        }
        for (const auto& n : with_cd) {
            const double share = 1.0 / static_cast<double>(with_cd.size());
            cd_sum += *discriminator_term(a.pred, n, weights.lambda2 * share, gs, ctx);
            ++cd_n;
        }
        mean.l_cd = cd_n ? cd_sum / cd_n : 0.0;
        any_cd = cd_n > 0;
    }

    const auto report = total_loss(mean, weights);
    json doc = loss_json(report);
    doc["weights"] = {{"lambda1", weights.lambda1}, {"lambda2", weights.lambda2}};
    doc["mode"] = a.mixed.empty() ? "unmixed" : "pairs";
    doc["discriminator_terms"] = any_cd;
    doc["items"] = per;
    doc["warnings"] = warnings;
    if (!a.out.parent_path().empty()) {
        ensure_dir(a.out.parent_path());
    }
    write_json(a.out, doc);
    ctx.outputs.push_back(a.out);
    if (gs) {
        sink.write(a.grads, ctx);
    }
    std::ostringstream os;
    os.precision(6);
    os << "loss-eval: total " << report.total << " (seg " << report.l_seg << ", seg_m " << report.l_seg_m
       << ", inv " << report.l_inv << ", cd " << report.l_cd << ") -> " << a.out.string();
    info(ctx, os.str());
}

void run_metrics(const MetricsArgs& a, Context& ctx) {
    const double tau = a.tau.value_or(ctx.config.metrics.tau);
    Averaging mode = ctx.config.metrics.averaging;
    if (a.averaging == "micro") {
        mode = Averaging::kMicro;
    } else if (a.averaging == "macro") {
        mode = Averaging::kMacro;
    } else if (!a.averaging.empty()) {
        throw ParameterError("--averaging must be micro or macro");
    }
    const auto gts = list_files(a.gt, kPng);
    if (gts.empty()) {
        throw IoError("no ground-truth masks in " + a.gt.string());
    }
    require_dir(a.pred, "prediction");
    std::vector<ConfusionCounts> counts;
    json per = json::array();
    for (const auto& g : gts) {
        const auto id = stem_of(g);
        const auto pp = find_prediction(a.pred, id);
        const auto gt = read_mask(g);
        const auto pred = binarize(load_prediction(pp), tau);
        const auto e = evaluate(pred, gt);
        counts.push_back(e.counts);
        per.push_back({{"id", id}, {"counts", to_json(e.counts)}, {"metrics", to_json(e.metrics)}});
        ctx.inputs.push_back(pp);
        ctx.inputs.push_back(g);
    }
    ConfusionCounts total;
    for (const auto& c : counts) {
        total += c;
    }
    const auto micro = aggregate(counts, Averaging::kMicro);
    const auto macro = aggregate(counts, Averaging::kMacro);
    const auto& chosen = mode == Averaging::kMicro ? micro : macro;
    const json doc{
        {"tau", tau},
        {"averaging", mode == Averaging::kMicro ? "micro" : "macro"},
        {"images", gts.size()},
        {"counts", to_json(total)},
        {"metrics", to_json(chosen)},
        {"micro", to_json(micro)},
        {"macro", to_json(macro)},
        {"per_image", per},
    };
    if (!a.out.parent_path().empty()) {
        ensure_dir(a.out.parent_path());
    }
    write_json(a.out, doc);
    ctx.outputs.push_back(a.out);
    std::ostringstream os;
    os.precision(4);
    os << "metrics: " << gts.size() << " images, iou " << chosen.iou << ", f1 " << chosen.f1 << ", precision "
       << chosen.precision << ", recall " << chosen.recall;
    info(ctx, os.str());
}

void run_synth(const SynthArgs& a, Context& ctx) {
    SceneSpec tmpl;
    tmpl.height = tmpl.width = a.size;
    tmpl.n_roads = a.roads;
    tmpl.width_min = a.width_min;
    tmpl.width_max = a.width_max;
    tmpl.curvature = a.curvature;
    tmpl.bg_texture = texture_from_string(a.texture);
    tmpl.distractors = a.distractors;
    const auto entries = gen_dataset(tmpl, a.count, a.seed, a.out);
    ctx.seeds["dataset"] = a.seed;
    json scene_seeds = json::object();
    for (const auto& e : entries) {
        scene_seeds[e.id] = e.spec.seed;
        for (const auto& f : {e.image, e.mask, e.scribble}) {
            ctx.outputs.push_back(a.out / f);
        }
    }
    ctx.seeds["scenes"] = scene_seeds;
    info(ctx, "synth: " + std::to_string(entries.size()) + " scenes -> " + a.out.string());
}

void run_overlay(const OverlayArgs& a, Context& ctx) {
    std::vector<std::tuple<fs::path, fs::path, fs::path>> jobs;
    if (fs::is_directory(a.image)) {
        require_dir(a.label, "label");
        ensure_dir(a.out);
        for (const auto& img : list_files(a.image, kPng)) {
            const auto lab = a.label / img.filename();
            if (fs::is_regular_file(lab)) {
                jobs.emplace_back(img, lab, a.out / img.filename());
            }
        }
        if (jobs.empty()) {
            throw IoError("no images in " + a.image.string() + " have labels in " + a.label.string());
        }
    } else {
        require_file(a.image, "image");
        require_file(a.label, "label");
        if (!a.out.parent_path().empty()) {
            ensure_dir(a.out.parent_path());
        }
        jobs.emplace_back(a.image, a.label, a.out);
    }
    parallel_for(jobs.size(), ctx.jobs, [&](std::size_t i) {
        const auto& [img_path, lab_path, out_path] = jobs[i];
        const auto img = read_png_rgb(img_path);
        const auto o = a.binary ? render_overlay(img, read_mask(lab_path)) : render_overlay(img, read_trilabel(lab_path));
        write_png_rgb(out_path, o);
    });
    for (const auto& [img_path, lab_path, out_path] : jobs) {
        ctx.inputs.push_back(img_path);
        ctx.inputs.push_back(lab_path);
        ctx.outputs.push_back(out_path);
    }
    info(ctx, "overlay: " + std::to_string(jobs.size()) + " images");
}

int run_selftest(const SelftestArgs& a, Context& ctx) {
    if (!(a.scale > 0.0)) {
        throw ParameterError("--scale must be > 0");
    }
    oracle::AcceptanceOptions opts;
    opts.scale = a.scale;
    opts.filter = a.filter;
    int failed = 0;
    const auto results = oracle::run_acceptance(opts, [&](const oracle::CriterionResult& r) {
        std::cout << oracle::format_result(r) << std::endl;
        failed += !r.passed;
    });
    if (results.empty()) {
        throw ParameterError("--filter \"" + a.filter + "\" matches no criterion");
    }
    info(ctx, std::to_string(results.size()) + " criteria, " + std::to_string(failed) + " failed");
    return failed;
}

}  // namespace scribkit::cli
