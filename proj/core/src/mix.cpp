#include "scribkit/mix.hpp"

#include <algorithm>
#include <cmath>

#include "scribkit/color.hpp"
#include "scribkit/error.hpp"

namespace scribkit {
namespace {

int bin_of(double value, double range, int bins) {
    const int b = static_cast<int>(std::floor(value / range * bins));
    return std::clamp(b, 0, bins - 1);
}

void check_gate(std::uint8_t gate) {
    if (gate > 1) {
        throw ParameterError("mix: gate must be 0 or 1");
    }
}

// out = g*[a*(1-alpha_b) + b*alpha_b] + (1-g)*a over one scalar map.
template <typename Map>
Map paste(const Map& a, const Map& b, const BinaryMask& alpha_b, double g) {
    Map out = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double al = alpha_b[i];
        out[i] = g * (a[i] * (1.0 - al) + b[i] * al) + (1.0 - g) * a[i];
    }
    return out;
}

}  // namespace

void MixConfig::validate() const {
    if (!(t > 0.0)) {
        throw ParameterError("mix config: t must be > 0");
    }
    if (h_bins < 2 || s_bins < 2 || v_bins < 2) {
        throw ParameterError("mix config: histogram bins must be >= 2");
    }
    if (!(epsilon > 0.0)) {
        throw ParameterError("mix config: epsilon must be > 0");
    }
}

ColorHistogram hsv_histogram(const RasterImage& img, const MixConfig& cfg) {
    cfg.validate();
    ColorHistogram hist{cfg.h_bins, cfg.s_bins, cfg.v_bins, {}};
    const std::size_t n_bins = static_cast<std::size_t>(cfg.h_bins) * static_cast<std::size_t>(cfg.s_bins) *
                               static_cast<std::size_t>(cfg.v_bins);
    std::vector<double> counts(n_bins, 0.0);
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            const Hsv hsv = rgb_to_hsv(img(r, c, 0), img(r, c, 1), img(r, c, 2));
            const int hb = bin_of(hsv.h, 360.0, cfg.h_bins);
            const int sb = bin_of(hsv.s, 1.0, cfg.s_bins);
            const int vb = bin_of(hsv.v, 1.0, cfg.v_bins);
            counts[static_cast<std::size_t>((hb * cfg.s_bins + sb) * cfg.v_bins + vb)] += 1.0;
        }
    }
    const double n = static_cast<double>(img.pixel_count());
    double total = 0.0;
    for (auto& v : counts) {
        v = (n > 0.0 ? v / n : 0.0) + cfg.epsilon;
        total += v;
    }
    for (auto& v : counts) {
        v /= total;
    }
    hist.bins = std::move(counts);
    return hist;
}

double kl_divergence(const ColorHistogram& h1, const ColorHistogram& h2) {
    if (!h1.same_layout(h2)) {
        throw ShapeError("kl_divergence: histogram bin layouts differ");
    }
    double kl = 0.0;
    for (std::size_t i = 0; i < h1.bins.size(); ++i) {
        const double p = h1.bins[i];
        const double q = h2.bins[i];
        if (p > 0.0) {
            if (!(q > 0.0)) {
                throw NumericError("kl_divergence: zero bin in the second histogram");
            }
            kl += p * std::log(p / q);
        }
    }
    // Rounding can leave a tiny negative sum for near-identical histograms.
    return std::max(0.0, kl);
}

GateDecision color_gate(const RasterImage& x1, const RasterImage& x2, const MixConfig& cfg) {
    const double kl = kl_divergence(hsv_histogram(x1, cfg), hsv_histogram(x2, cfg));
    return {static_cast<std::uint8_t>(kl < cfg.t ? 1 : 0), kl};
}

std::pair<RasterImage, RasterImage> mix_images(const RasterImage& x1, const RasterImage& x2, const TriLabel& y1,
                                               const TriLabel& y2, std::uint8_t gate) {
    check_gate(gate);
    require_same_shape(x1, x2, "mix_images");
    require_same_shape(x1, y1, "mix_images");
    require_same_shape(x1, y2, "mix_images");
    const BinaryMask a1 = nonbackground_mask(y1);
    const BinaryMask a2 = nonbackground_mask(y2);
    const double g = gate;
    RasterImage m12 = x1;
    RasterImage m21 = x2;
    for (int r = 0; r < x1.height(); ++r) {
        for (int c = 0; c < x1.width(); ++c) {
            const double al2 = a2(r, c);
            const double al1 = a1(r, c);
            for (int ch = 0; ch < RasterImage::kChannels; ++ch) {
                const double v1 = x1(r, c, ch);
                const double v2 = x2(r, c, ch);
                m12(r, c, ch) = g * (v1 * (1.0 - al2) + v2 * al2) + (1.0 - g) * v1;
                m21(r, c, ch) = g * (v2 * (1.0 - al1) + v1 * al1) + (1.0 - g) * v2;
            }
        }
    }
    return {std::move(m12), std::move(m21)};
}

std::pair<TriLabel, TriLabel> mix_labels(const TriLabel& y1, const TriLabel& y2, std::uint8_t gate) {
    check_gate(gate);
    require_same_shape(y1, y2, "mix_labels");
    if (!gate) {
        return {y1, y2};
    }
    return {paste(y1, y2, nonbackground_mask(y2), 1.0), paste(y2, y1, nonbackground_mask(y1), 1.0)};
}

std::pair<PredictionMap, PredictionMap> mix_predictions(const PredictionMap& p1, const PredictionMap& p2,
                                                        const TriLabel& y1, const TriLabel& y2,
                                                        std::uint8_t gate) {
    check_gate(gate);
    require_same_shape(p1, p2, "mix_predictions");
    require_same_shape(p1, y1, "mix_predictions");
    require_same_shape(p1, y2, "mix_predictions");
    const double g = gate;
    return {paste(p1, p2, nonbackground_mask(y2), g), paste(p2, p1, nonbackground_mask(y1), g)};
}

MixedPair structure_aware_mix(const RasterImage& x1, const RasterImage& x2, const TriLabel& y1,
                              const TriLabel& y2, const MixConfig& cfg) {
    const GateDecision d = color_gate(x1, x2, cfg);
    MixedPair out;
    out.gate = d.gate;
    out.kl_value = d.kl_value;
    std::tie(out.x_m_12, out.x_m_21) = mix_images(x1, x2, y1, y2, d.gate);
    std::tie(out.y_m_12, out.y_m_21) = mix_labels(y1, y2, d.gate);
    return out;
}

}  // namespace scribkit
