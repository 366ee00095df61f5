#include "scribkit/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "scribkit/error.hpp"

namespace scribkit {

void ExpansionConfig::validate() const {
    if (!(b1 > 0.0) || !(b2 > b1)) {
        throw ParameterError("expansion config: require 0 < b1 < b2");
    }
    if (n_slic < 2) {
        throw ParameterError("expansion config: n_slic must be >= 2");
    }
    if (slic_iterations < 1) {
        throw ParameterError("expansion config: slic_iterations must be >= 1");
    }
    if (!(slic_compactness > 0.0)) {
        throw ParameterError("expansion config: slic_compactness must be > 0");
    }
    if (gc_sigma && !(*gc_sigma > 0.0)) {
        throw ParameterError("expansion config: gc_sigma must be > 0");
    }
    if (!(gc_lambda >= 0.0)) {
        throw ParameterError("expansion config: gc_lambda must be >= 0");
    }
}

TriLabel statistic_expand(const DistanceMap& dis, const ExpansionConfig& cfg) {
    cfg.validate();
    TriLabel ys(dis.height(), dis.width());
    for (std::size_t i = 0; i < dis.size(); ++i) {
        const double d = dis[i];
        if (d <= cfg.b1) {
            ys[i] = TriLabel::kForeground;
        } else if (d <= cfg.b2) {
            ys[i] = TriLabel::kUncertain;
        } else {
            ys[i] = TriLabel::kBackground;
        }
    }
    return ys;
}

int compute_stride(int height, int width, int n_slic, bool literal) {
    if (height < 1 || width < 1 || n_slic < 1) {
        throw ParameterError("compute_stride: height, width and n_slic must be >= 1");
    }
    const double area = static_cast<double>(height) * static_cast<double>(width);
    const double numerator = literal ? area : std::sqrt(area);
    const double q = std::round(numerator / (std::sqrt(2.0) * std::sqrt(static_cast<double>(n_slic))));
    return std::max(1, static_cast<int>(q));
}

double background_interval(int height, int width, int n_slic, bool literal) {
    if (height < 1 || width < 1 || n_slic < 1) {
        throw ParameterError("background_interval: height, width and n_slic must be >= 1");
    }
    const double ratio = static_cast<double>(height) * static_cast<double>(width) / n_slic;
    return std::max(1.0, literal ? ratio : std::sqrt(ratio));
}

std::vector<int> grid_coordinates(int length, double step) {
    std::vector<int> out;
    const double first = std::min(step, static_cast<double>(length)) / 2.0;
    for (double x = first; x < length; x += step) {
        out.push_back(static_cast<int>(std::floor(x)));
    }
    return out;
}

std::vector<Pixel> sample_background_seeds(const ScribbleMap& s, const DistanceMap& dis,
                                           const ExpansionConfig& cfg) {
    cfg.validate();
    require_same_shape(s, dis, "sample_background_seeds");
    const double g = background_interval(s.height(), s.width(), cfg.n_slic, cfg.literal_formulas);
    const double keep_out = (cfg.b1 + cfg.b2) / 2.0;
    std::vector<Pixel> seeds;
    for (int r : grid_coordinates(s.height(), g)) {
        for (int c : grid_coordinates(s.width(), g)) {
            if (dis(r, c) > keep_out) {
                seeds.push_back({r, c});
            }
        }
    }
    return seeds;
}

std::vector<Pixel> sample_foreground_seeds(const ScribbleMap& s, const ExpansionConfig& cfg) {
    const int q = compute_stride(s.height(), s.width(), cfg.n_slic, cfg.literal_formulas);
    const KeyPointSet kp = detect_keypoints(s);
    std::vector<Pixel> out;
    std::set<Pixel> seen;
    auto add = [&](const Pixel& p) {
        if (seen.insert(p).second) {
            out.push_back(p);
        }
    };
    for (const auto& p : kp.intersections) {
        add(p);
    }
    for (const auto& p : kp.endpoints) {
        add(p);
    }
    for (const auto& p : sample_representative(s, q)) {
        add(p);
    }
    return out;
}

TriLabel merge_labels(const TriLabel& ys, const TriLabel& yc) {
    require_same_shape(ys, yc, "merge_labels");
    TriLabel y(ys.height(), ys.width());
    for (std::size_t i = 0; i < ys.size(); ++i) {
        if (yc[i] != 0.0 && yc[i] != 1.0) {
            throw FormatError("merge_labels: content label must be binary");
        }
        y[i] = (ys[i] == TriLabel::kBackground && yc[i] == 1.0) ? TriLabel::kUncertain : ys[i];
    }
    return y;
}

}  // namespace scribkit
