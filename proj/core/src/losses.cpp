#include "scribkit/losses.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "scribkit/error.hpp"

namespace scribkit {

void LossWeights::validate() const {
    if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0) || std::isinf(lambda1) || std::isinf(lambda2)) {
        throw ParameterError("loss weights must be finite and >= 0");
    }
}

LossValue partial_bce(const TriLabel& y, const PredictionMap& p) {
    require_same_shape(y, p, "partial_bce");
    LossValue out;
    out.grad.assign(p.size(), 0.0);
    std::size_t n = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        n += y[i] == 0.0 || y[i] == 1.0;
    }
    if (n == 0) {
        out.no_support = true;
        return out;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double t = y[i];
        if (t != 0.0 && t != 1.0) {
            continue;
        }
        const double raw = p[i];
        const double q = std::clamp(raw, kBceEpsilon, 1.0 - kBceEpsilon);
        const bool clamped = q != raw;
        if (t == 1.0) {
            sum -= std::log(q);
            out.grad[i] = clamped ? 0.0 : -inv_n / q;
        } else {
            sum -= std::log(1.0 - q);
            out.grad[i] = clamped ? 0.0 : inv_n / (1.0 - q);
        }
    }
    out.value = sum * inv_n;
    return out;
}

PairLoss seg_loss(const TriLabel& y1, const TriLabel& y2, const PredictionMap& p1, const PredictionMap& p2) {
    const LossValue a = partial_bce(y1, p1);
    const LossValue b = partial_bce(y2, p2);
    PairLoss out;
    out.value = 0.5 * (a.value + b.value);
    out.grad_first.resize(a.grad.size());
    out.grad_second.resize(b.grad.size());
    std::transform(a.grad.begin(), a.grad.end(), out.grad_first.begin(), [](double g) { return 0.5 * g; });
    std::transform(b.grad.begin(), b.grad.end(), out.grad_second.begin(), [](double g) { return 0.5 * g; });
    return out;
}

LossValue cosine_loss(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw ShapeError("cosine_loss: vector lengths differ");
    }
    double pq = 0.0, pp = 0.0, qq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        pq += p[i] * q[i];
        pp += p[i] * p[i];
        qq += q[i] * q[i];
    }
    if (!(pp > 0.0) || !(qq > 0.0)) {
        throw NumericError("cosine_loss: zero-norm input, cosine undefined");
    }
    const double np = std::sqrt(pp);
    const double nq = std::sqrt(qq);
    const double cos = pq / (np * nq);
    LossValue out;
    out.value = 1.0 - cos;
    out.grad.resize(p.size());
    // d(1 - cos)/dp = -(q / (|p||q|) - cos * p / |p|^2)
    const double a = 1.0 / (np * nq);
    const double b = cos / pp;
    for (std::size_t i = 0; i < p.size(); ++i) {
        out.grad[i] = -(a * q[i] - b * p[i]);
    }
    return out;
}

InvarianceLoss invariance_loss(const PredictionMap& pm_12, const PredictionMap& pm_21,
                               const PredictionMap& pbar_12, const PredictionMap& pbar_21) {
    require_same_shape(pm_12, pbar_12, "invariance_loss");
    require_same_shape(pm_21, pbar_21, "invariance_loss");
    const LossValue a = cosine_loss(pm_12.values(), pbar_12.values());
    const LossValue b = cosine_loss(pm_21.values(), pbar_21.values());
    InvarianceLoss out;
    out.value = 0.5 * (a.value + b.value);
    out.grad_pm_12.resize(a.grad.size());
    out.grad_pm_21.resize(b.grad.size());
    std::transform(a.grad.begin(), a.grad.end(), out.grad_pm_12.begin(), [](double g) { return 0.5 * g; });
    std::transform(b.grad.begin(), b.grad.end(), out.grad_pm_21.begin(), [](double g) { return 0.5 * g; });
    out.grad_pbar_12.assign(pbar_12.size(), 0.0);
    out.grad_pbar_21.assign(pbar_21.size(), 0.0);
    return out;
}

TopologyFilter topology_filter(const TriLabel& y) {
    validate(y);
    TopologyFilter t(y.height(), y.width());
    for (std::size_t i = 0; i < y.size(); ++i) {
        t[i] = y[i] == TriLabel::kUncertain ? 0 : 1;
    }
    return t;
}

FilteredPair apply_topology_filter(const PredictionMap& p, const TriLabel& y) {
    require_same_shape(p, y, "apply_topology_filter");
    const TopologyFilter t = topology_filter(y);
    FilteredPair out{PredictionMap(p.height(), p.width()), TriLabel(y.height(), y.width())};
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double m = t[i];
        out.p_t[i] = p[i] * m;
        out.y_t[i] = y[i] * m;
    }
    return out;
}

void PatchScoreMap::validate() const {
    if (n < 0 || data.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * 2) {
        throw FormatError("patch scores: data length must be n*n*2");
    }
    for (std::size_t k = 0; k < data.size(); k += 2) {
        const double a = data[k];
        const double b = data[k + 1];
        if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0) || std::abs(a + b - 1.0) > 1e-6) {
            std::ostringstream os;
            os << "patch scores: patch " << k / 2 << " is not a probability pair (" << a << ", " << b << ")";
            throw FormatError(os.str());
        }
    }
}

LossValue patch_adv_loss(const PatchScoreMap& scores, RealFakeFlag flag) {
    scores.validate();
    LossValue out;
    out.grad.assign(scores.data.size(), 0.0);
    const std::size_t patches = scores.data.size() / 2;
    if (patches == 0) {
        out.no_support = true;
        return out;
    }
    const int cls = flag == RealFakeFlag::kReal ? 1 : 0;
    const double inv = 1.0 / static_cast<double>(patches);
    double sum = 0.0;
    for (std::size_t k = 0; k < patches; ++k) {
        const double s = scores.data[2 * k + static_cast<std::size_t>(cls)];
        sum -= std::log(s);
        out.grad[2 * k + static_cast<std::size_t>(cls)] = -inv / s;
    }
    out.value = sum * inv;
    return out;
}

LossReport total_loss(const LossComponents& c, const LossWeights& w) {
    w.validate();
    for (double v : {c.l_seg, c.l_seg_m, c.l_inv, c.l_cd}) {
        if (!std::isfinite(v)) {
            throw NumericError("total_loss: non-finite loss component");
        }
    }
    LossReport r;
    r.l_seg = c.l_seg;
    r.l_seg_m = c.l_seg_m;
    r.l_inv = c.l_inv;
    r.l_cd = c.l_cd;
    r.weights = w;
    r.total = c.l_seg + c.l_seg_m + w.lambda1 * c.l_inv + w.lambda2 * c.l_cd;
    return r;
}

}  // namespace scribkit
