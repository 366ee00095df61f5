#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "scribkit/raster.hpp"

namespace scribkit {

// Predictions are probabilities. BCE clamps them to [kBceEpsilon, 1 - kBceEpsilon].
inline constexpr double kBceEpsilon = 1e-7;

struct LossWeights {
    double lambda1 = 0.1;  // invariance term
    double lambda2 = 0.1;  // connectivity (adversarial) term

    void validate() const;
};

// A scalar loss with its gradient w.r.t. one flattened input.
struct LossValue {
    double value = 0.0;
    std::vector<double> grad;
    bool no_support = false;  // set when nothing contributed (e.g. all pixels uncertain)
};

// Mean BCE over pixels with y in {0,1}; uncertain pixels carry no loss and
// zero gradient. With no certain pixel: value 0, zero gradient, no_support.
LossValue partial_bce(const TriLabel& y, const PredictionMap& p);

struct PairLoss {
    double value = 0.0;
    std::vector<double> grad_first;
    std::vector<double> grad_second;
};

// 0.5 * [partial_bce(y1,p1) + partial_bce(y2,p2)]; serves both the original
// and the mixed segmentation terms.
PairLoss seg_loss(const TriLabel& y1, const TriLabel& y2, const PredictionMap& p1, const PredictionMap& p2);

// 1 - <p,q> / (|p| |q|). The gradient is w.r.t. p only; q is a constant.
// Throws NumericError on a zero-norm input.
LossValue cosine_loss(std::span<const double> p, std::span<const double> q_stopgrad);

struct InvarianceLoss {
    double value = 0.0;
    std::vector<double> grad_pm_12;
    std::vector<double> grad_pm_21;
    // Always zero: the mixed original predictions are stop-gradient targets.
    std::vector<double> grad_pbar_12;
    std::vector<double> grad_pbar_21;
};

InvarianceLoss invariance_loss(const PredictionMap& pm_12, const PredictionMap& pm_21,
                               const PredictionMap& pbar_12, const PredictionMap& pbar_21);

// 1 where y is certain (0 or 1), 0 where y = 0.5.
using TopologyFilter = Grid<std::uint8_t>;

TopologyFilter topology_filter(const TriLabel& y);

struct FilteredPair {
    PredictionMap p_t;
    TriLabel y_t;
};

FilteredPair apply_topology_filter(const PredictionMap& p, const TriLabel& y);

// n x n patches x 2 classes (0 = fake, 1 = real), layout (h, w, class).
struct PatchScoreMap {
    int n = 0;
    std::vector<double> data;

    double& at(int h, int w, int cls) { return data[static_cast<std::size_t>((h * n + w) * 2 + cls)]; }
    double at(int h, int w, int cls) const { return data[static_cast<std::size_t>((h * n + w) * 2 + cls)]; }

    // Throws FormatError unless every patch has two entries in (0,1) summing
    // to 1 within 1e-6.
    void validate() const;
};

// Discriminator input flag: 0 for predictions (fake), 1 for pseudo labels (real).
enum class RealFakeFlag : std::uint8_t { kFake = 0, kReal = 1 };

// -sum_{h,w} [(1-y_n) ln s(h,w,0) + y_n ln s(h,w,1)] / n^2, with its gradient
// w.r.t. the score entries. Averaged over patches; multiply by n^2 for the
// plain sum.
LossValue patch_adv_loss(const PatchScoreMap& scores, RealFakeFlag flag);

struct LossComponents {
    double l_seg = 0.0;
    double l_seg_m = 0.0;
    double l_inv = 0.0;
    double l_cd = 0.0;
};

struct LossReport {
    double l_seg = 0.0;
    double l_seg_m = 0.0;
    double l_inv = 0.0;
    double l_cd = 0.0;
    double total = 0.0;
    LossWeights weights;
    std::map<std::string, std::vector<double>> grads;
};

// total = l_seg + l_seg_m + lambda1 * l_inv + lambda2 * l_cd.
// Throws NumericError on non-finite components.
LossReport total_loss(const LossComponents& c, const LossWeights& w);

}  // namespace scribkit
