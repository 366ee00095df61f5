#include "scribkit/metrics.hpp"

#include "scribkit/error.hpp"

namespace scribkit {

BinaryMask binarize(const PredictionMap& p, double tau) {
    if (!(tau > 0.0 && tau < 1.0)) {
        throw ParameterError("binarize: tau must lie in (0,1)");
    }
    BinaryMask m(p.height(), p.width());
    for (std::size_t i = 0; i < p.size(); ++i) {
        m[i] = p[i] >= tau ? 1 : 0;
    }
    return m;
}

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt) {
    require_same_shape(pred, gt, "evaluate");
    ConfusionCounts c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const bool p = pred[i] != 0;
        const bool g = gt[i] != 0;
        c.tp += p && g;
        c.fp += p && !g;
        c.fn += !p && g;
        c.tn += !p && !g;
    }
    return c;
}

MetricReport metrics_from_counts(const ConfusionCounts& c) {
    MetricReport m;
    const double tp = static_cast<double>(c.tp);
    const double fp = static_cast<double>(c.fp);
    const double fn = static_cast<double>(c.fn);
    if (c.tp + c.fp > 0) {
        m.precision = tp / (tp + fp);
    } else {
        m.precision_undefined = true;
    }
    if (c.tp + c.fn > 0) {
        m.recall = tp / (tp + fn);
    } else {
        m.recall_undefined = true;
    }
    if (c.tp + c.fp + c.fn > 0) {
        m.iou = tp / (tp + fp + fn);
        m.f1 = 2.0 * tp / (2.0 * tp + fp + fn);
    } else {
        m.iou_undefined = true;
    }
    return m;
}

Evaluation evaluate(const BinaryMask& pred, const BinaryMask& gt) {
    Evaluation e;
    e.counts = confusion(pred, gt);
    e.metrics = metrics_from_counts(e.counts);
    return e;
}

MetricReport aggregate(const std::vector<ConfusionCounts>& per_image, Averaging mode) {
    if (mode == Averaging::kMicro) {
        ConfusionCounts sum;
        for (const auto& c : per_image) {
            sum += c;
        }
        return metrics_from_counts(sum);
    }
    MetricReport out;
    if (per_image.empty()) {
        out.precision_undefined = out.recall_undefined = out.iou_undefined = true;
        return out;
    }
    for (const auto& c : per_image) {
        const MetricReport m = metrics_from_counts(c);
        out.iou += m.iou;
        out.f1 += m.f1;
        out.precision += m.precision;
        out.recall += m.recall;
        out.precision_undefined = out.precision_undefined || m.precision_undefined;
        out.recall_undefined = out.recall_undefined || m.recall_undefined;
        out.iou_undefined = out.iou_undefined || m.iou_undefined;
    }
    const double n = static_cast<double>(per_image.size());
    out.iou /= n;
    out.f1 /= n;
    out.precision /= n;
    out.recall /= n;
    return out;
}

}  // namespace scribkit
