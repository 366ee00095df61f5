#include "scribkit/graph_cut.hpp"

#include <cmath>
#include <limits>

#include "scribkit/maxflow.hpp"

namespace scribkit {

BinaryLabeling solve_min_cut(const BinaryLabelingProblem& problem) {
    const std::size_t n = problem.size();
    if (problem.cost_background.size() != n || (!problem.hard.empty() && problem.hard.size() != n)) {
        throw ParameterError("solve_min_cut: inconsistent problem sizes");
    }
    const double inf = std::numeric_limits<double>::infinity();
    MaxFlowGraph g(static_cast<int>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double cf = problem.cost_foreground[i];
        const double cb = problem.cost_background[i];
        if (!(cf >= 0.0) || !(cb >= 0.0) || std::isinf(cf) || std::isinf(cb)) {
            throw ParameterError("solve_min_cut: unary costs must be finite and non-negative");
        }
        const int hard = problem.hard.empty() ? -1 : problem.hard[i];
        // Source side is foreground: cutting node->sink pays the foreground cost.
        double to_source = cb;
        double to_sink = cf;
        if (hard == 1) {
            to_source = inf;
        } else if (hard == 0) {
            to_sink = inf;
        }
        g.add_terminal_edges(static_cast<int>(i), to_source, to_sink);
    }
    for (const auto& e : problem.edges) {
        if (!(e.weight >= 0.0) || std::isinf(e.weight)) {
            throw ParameterError("solve_min_cut: pairwise weights must be finite and non-negative");
        }
        if (e.weight > 0.0) {
            g.add_edge(e.a, e.b, e.weight, e.weight);
        }
    }
    BinaryLabeling out;
    out.cut_cost = g.solve();
    out.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.labels[i] = g.in_source_set(static_cast<int>(i)) ? 1 : 0;
    }
    return out;
}

GraphCutResult graph_cut(const SuperpixelMap& sp, const SeedSet& seeds, const ExpansionConfig& cfg) {
    cfg.validate();
    const std::size_t k = sp.size();
    const auto& labels = sp.labels;

    std::vector<std::int8_t> hard(k, -1);
    std::vector<std::uint8_t> has_fg(k, 0);
    std::vector<std::uint8_t> has_bg(k, 0);
    for (const auto& p : seeds.foreground) {
        if (labels.contains(p.row, p.col)) {
            has_fg[static_cast<std::size_t>(labels(p.row, p.col))] = 1;
        }
    }
    for (const auto& p : seeds.background) {
        if (labels.contains(p.row, p.col)) {
            has_bg[static_cast<std::size_t>(labels(p.row, p.col))] = 1;
        }
    }

    GraphCutResult res;
    Lab fg_mean, bg_mean;
    double fg_weight = 0.0, bg_weight = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const auto& cl = sp.clusters[i];
        const double wgt = static_cast<double>(cl.pixel_count);
        if (has_fg[i]) {
            hard[i] = 1;
            ++res.foreground_seeded;
            res.conflicting += has_bg[i];
            fg_mean.l += wgt * cl.mean_color.l;
            fg_mean.a += wgt * cl.mean_color.a;
            fg_mean.b += wgt * cl.mean_color.b;
            fg_weight += wgt;
        } else if (has_bg[i]) {
            hard[i] = 0;
            ++res.background_seeded;
            bg_mean.l += wgt * cl.mean_color.l;
            bg_mean.a += wgt * cl.mean_color.a;
            bg_mean.b += wgt * cl.mean_color.b;
            bg_weight += wgt;
        }
    }
    if (res.foreground_seeded == 0 || res.background_seeded == 0) {
        throw MissingSeedsError(
            "graph_cut: need at least one foreground- and one background-seeded superpixel; "
            "fall back to the statistic foreground for y_c");
    }
    fg_mean = {fg_mean.l / fg_weight, fg_mean.a / fg_weight, fg_mean.b / fg_weight};
    bg_mean = {bg_mean.l / bg_weight, bg_mean.a / bg_weight, bg_mean.b / bg_weight};

    double sigma = 0.0;
    if (cfg.gc_sigma) {
        sigma = *cfg.gc_sigma;
    } else {
        double sum = 0.0;
        for (const auto& [a, b] : sp.adjacency) {
            sum += std::sqrt(lab_distance_sq(sp.clusters[static_cast<std::size_t>(a)].mean_color,
                                             sp.clusters[static_cast<std::size_t>(b)].mean_color));
        }
        sigma = sp.adjacency.empty() ? 0.0 : sum / static_cast<double>(sp.adjacency.size());
        if (!(sigma > 0.0)) {
            sigma = 1.0;
        }
    }
    res.sigma = sigma;

    BinaryLabelingProblem problem;
    problem.cost_foreground.resize(k, 0.0);
    problem.cost_background.resize(k, 0.0);
    problem.hard = hard;
    for (std::size_t i = 0; i < k; ++i) {
        if (hard[i] >= 0) {
            continue;
        }
        const double dfg = std::sqrt(lab_distance_sq(sp.clusters[i].mean_color, fg_mean));
        const double dbg = std::sqrt(lab_distance_sq(sp.clusters[i].mean_color, bg_mean));
        const double total = dfg + dbg;
        problem.cost_foreground[i] = total > 0.0 ? dfg / total : 0.5;
        problem.cost_background[i] = total > 0.0 ? dbg / total : 0.5;
    }
    const double two_sigma_sq = 2.0 * sigma * sigma;
    for (const auto& [a, b] : sp.adjacency) {
        const double d2 = lab_distance_sq(sp.clusters[static_cast<std::size_t>(a)].mean_color,
                                          sp.clusters[static_cast<std::size_t>(b)].mean_color);
        problem.edges.push_back({a, b, cfg.gc_lambda * std::exp(-d2 / two_sigma_sq)});
    }

    const BinaryLabeling sol = solve_min_cut(problem);
    res.cut_cost = sol.cut_cost;
    res.cluster_labels = sol.labels;
    res.content = TriLabel(labels.height(), labels.width());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        res.content[i] = sol.labels[static_cast<std::size_t>(labels[i])] ? 1.0 : 0.0;
    }
    return res;
}

}  // namespace scribkit
