#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "scribkit/raster.hpp"

namespace scribkit {

struct MixConfig {
    // Pairs mix only when KL(hist1 || hist2) < t. +infinity disables the gate.
    double t = 0.5;
    int h_bins = 16;
    int s_bins = 8;
    int v_bins = 8;
    double epsilon = 1e-6;

    void validate() const;
};

// Joint HSV histogram, smoothed by epsilon per bin and normalized to sum 1.
struct ColorHistogram {
    int h_bins = 0;
    int s_bins = 0;
    int v_bins = 0;
    std::vector<double> bins;  // index (h * s_bins + s) * v_bins + v

    bool same_layout(const ColorHistogram& o) const {
        return h_bins == o.h_bins && s_bins == o.s_bins && v_bins == o.v_bins && bins.size() == o.bins.size();
    }
};

ColorHistogram hsv_histogram(const RasterImage& img, const MixConfig& cfg);

// sum h1 * ln(h1 / h2). Throws ShapeError on a bin-layout mismatch.
double kl_divergence(const ColorHistogram& h1, const ColorHistogram& h2);

struct GateDecision {
    std::uint8_t gate = 0;
    double kl_value = 0.0;
};

GateDecision color_gate(const RasterImage& x1, const RasterImage& x2, const MixConfig& cfg);

// x_m_12 = g*[x1*(1-a2) + x2*a2] + (1-g)*x1, and symmetrically, with
// a_i = I(y_i > 0).
std::pair<RasterImage, RasterImage> mix_images(const RasterImage& x1, const RasterImage& x2, const TriLabel& y1,
                                               const TriLabel& y2, std::uint8_t gate);

// Same mixing on the labels; gate 0 returns the originals.
std::pair<TriLabel, TriLabel> mix_labels(const TriLabel& y1, const TriLabel& y2, std::uint8_t gate);

// Same mixing on predictions of the original images. The result is the
// constant target of the invariance loss.
std::pair<PredictionMap, PredictionMap> mix_predictions(const PredictionMap& p1, const PredictionMap& p2,
                                                        const TriLabel& y1, const TriLabel& y2,
                                                        std::uint8_t gate);

struct MixedPair {
    RasterImage x_m_12;
    RasterImage x_m_21;
    TriLabel y_m_12;
    TriLabel y_m_21;
    std::uint8_t gate = 0;
    double kl_value = 0.0;
};

MixedPair structure_aware_mix(const RasterImage& x1, const RasterImage& x2, const TriLabel& y1,
                              const TriLabel& y2, const MixConfig& cfg);

}  // namespace scribkit
