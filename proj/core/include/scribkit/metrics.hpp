#pragma once

#include <cstdint>
#include <vector>

#include "scribkit/raster.hpp"

namespace scribkit {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const { return tp + fp + fn + tn; }

    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        tn += o.tn;
        return *this;
    }
    friend ConfusionCounts operator+(ConfusionCounts a, const ConfusionCounts& b) { return a += b; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct MetricReport {
    double iou = 0.0;
    double f1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    // Set when the corresponding denominator was zero and the ratio defaulted to 0.
    bool precision_undefined = false;
    bool recall_undefined = false;
    bool iou_undefined = false;
};

enum class Averaging { kMicro, kMacro };

// mask = 1 iff p >= tau. Throws ParameterError unless tau is in (0,1).
BinaryMask binarize(const PredictionMap& p, double tau = 0.5);

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt);

MetricReport metrics_from_counts(const ConfusionCounts& c);

struct Evaluation {
    ConfusionCounts counts;
    MetricReport metrics;
};

Evaluation evaluate(const BinaryMask& pred, const BinaryMask& gt);

// Micro: ratios of the summed counts. Macro: mean of per-image ratios.
MetricReport aggregate(const std::vector<ConfusionCounts>& per_image, Averaging mode = Averaging::kMicro);

}  // namespace scribkit
