#include "scribkit/scle.hpp"

#include "scribkit/distance.hpp"

namespace scribkit {

ExpansionResult expand_labels(const RasterImage& img, const ScribbleMap& scribble, const ExpansionConfig& cfg) {
    cfg.validate();
    require_same_shape(img, scribble, "expand_labels");

    ExpansionResult res;
    const DistanceMap dis = distance_transform(scribble);
    res.statistic = statistic_expand(dis, cfg);
    res.keypoints = detect_keypoints(scribble);
    res.stride = compute_stride(img.height(), img.width(), cfg.n_slic, cfg.literal_formulas);
    res.seeds.foreground = sample_foreground_seeds(scribble, cfg);
    res.seeds.background = sample_background_seeds(scribble, dis, cfg);
    res.superpixels = slic(img, res.seeds, cfg);

    try {
        GraphCutResult gc = graph_cut(res.superpixels, res.seeds, cfg);
        res.content = std::move(gc.content);
        res.cut_cost = gc.cut_cost;
        res.sigma = gc.sigma;
    } catch (const MissingSeedsError& e) {
        res.graph_cut_fallback = true;
        res.fallback_reason = e.what();
        res.content = TriLabel(img.height(), img.width());
        for (std::size_t i = 0; i < res.statistic.size(); ++i) {
            res.content[i] = res.statistic[i] == TriLabel::kForeground ? 1.0 : 0.0;
        }
    }
    res.merged = merge_labels(res.statistic, res.content);
    return res;
}

}  // namespace scribkit
