#include "scribkit_oracles/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace scribkit::oracle {

Grid<std::int64_t> brute_force_squared_distance(const BinaryMask& s) {
    std::vector<std::pair<int, int>> pts;
    for (int r = 0; r < s.height(); ++r) {
        for (int c = 0; c < s.width(); ++c) {
            if (s(r, c)) {
                pts.emplace_back(r, c);
            }
        }
    }
    Grid<std::int64_t> out(s.height(), s.width(), -1);
    for (int r = 0; r < s.height(); ++r) {
        for (int c = 0; c < s.width(); ++c) {
            std::int64_t best = -1;
            for (const auto& [pr, pc] : pts) {
                const std::int64_t dr = r - pr;
                const std::int64_t dc = c - pc;
                const std::int64_t d = dr * dr + dc * dc;
                if (best < 0 || d < best) {
                    best = d;
                }
            }
            out(r, c) = best;
        }
    }
    return out;
}

TriLabel brute_force_statistic_label(const BinaryMask& s, double b1, double b2) {
    const auto sq = brute_force_squared_distance(s);
    TriLabel y(s.height(), s.width());
    for (std::size_t i = 0; i < sq.size(); ++i) {
        const double d = std::sqrt(static_cast<double>(sq[i]));
        y[i] = d <= b1 ? 1.0 : (d <= b2 ? 0.5 : 0.0);
    }
    return y;
}

double labeling_energy(const BinaryLabelingProblem& p, const std::vector<std::uint8_t>& labels) {
    double e = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!p.hard.empty() && p.hard[i] >= 0 && p.hard[i] != labels[i]) {
            return std::numeric_limits<double>::infinity();
        }
        e += labels[i] ? p.cost_foreground[i] : p.cost_background[i];
    }
    for (const auto& ed : p.edges) {
        if (labels[static_cast<std::size_t>(ed.a)] != labels[static_cast<std::size_t>(ed.b)]) {
            e += ed.weight;
        }
    }
    return e;
}

ExhaustiveResult exhaustive_min_cut(const BinaryLabelingProblem& p) {
    std::vector<std::size_t> free_nodes;
    std::vector<std::uint8_t> labels(p.size(), 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const int h = p.hard.empty() ? -1 : p.hard[i];
        if (h < 0) {
            free_nodes.push_back(i);
        } else {
            labels[i] = static_cast<std::uint8_t>(h);
        }
    }
    ExhaustiveResult best{std::numeric_limits<double>::infinity(), labels};
    const std::uint64_t combos = std::uint64_t{1} << free_nodes.size();
    for (std::uint64_t mask = 0; mask < combos; ++mask) {
        for (std::size_t k = 0; k < free_nodes.size(); ++k) {
            labels[free_nodes[k]] = static_cast<std::uint8_t>((mask >> k) & 1u);
        }
        const double e = labeling_energy(p, labels);
        if (e < best.min_energy) {
            best.min_energy = e;
            best.labels = labels;
        }
    }
    return best;
}

BinaryMask textbook_zhang_suen(const BinaryMask& input) {
    BinaryMask m = input;
    auto at = [&](int r, int c) -> int { return m.contains(r, c) && m(r, c) ? 1 : 0; };
    bool changed = true;
    while (changed) {
        changed = false;
        for (int step = 0; step < 2; ++step) {
            std::vector<std::size_t> kill;
            for (int r = 0; r < m.height(); ++r) {
                for (int c = 0; c < m.width(); ++c) {
                    if (!m(r, c)) {
                        continue;
                    }
                    const int p2 = at(r - 1, c), p3 = at(r - 1, c + 1), p4 = at(r, c + 1), p5 = at(r + 1, c + 1);
                    const int p6 = at(r + 1, c), p7 = at(r + 1, c - 1), p8 = at(r, c - 1), p9 = at(r - 1, c - 1);
                    const int seq[9] = {p2, p3, p4, p5, p6, p7, p8, p9, p2};
                    int a = 0;
                    for (int k = 0; k < 8; ++k) {
                        a += seq[k] == 0 && seq[k + 1] == 1;
                    }
                    const int b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9;
                    const bool c1 = step == 0 ? p2 * p4 * p6 == 0 : p2 * p4 * p8 == 0;
                    const bool c2 = step == 0 ? p4 * p6 * p8 == 0 : p2 * p6 * p8 == 0;
                    if (b >= 2 && b <= 6 && a == 1 && c1 && c2) {
                        kill.push_back(m.index(r, c));
                    }
                }
            }
            for (auto i : kill) {
                m[i] = 0;
            }
            changed = changed || !kill.empty();
        }
    }
    return m;
}

ConfusionCounts count_confusion(const BinaryMask& pred, const BinaryMask& gt) {
    ConfusionCounts c;
    for (int r = 0; r < pred.height(); ++r) {
        for (int col = 0; col < pred.width(); ++col) {
            const int p = pred(r, col) ? 1 : 0;
            const int g = gt(r, col) ? 1 : 0;
            if (p == 1 && g == 1) {
                ++c.tp;
            } else if (p == 1) {
                ++c.fp;
            } else if (g == 1) {
                ++c.fn;
            } else {
                ++c.tn;
            }
        }
    }
    return c;
}

int count_components(const BinaryMask& m) {
    Grid<std::uint8_t> seen(m.height(), m.width());
    int n = 0;
    std::deque<std::pair<int, int>> q;
    for (int r = 0; r < m.height(); ++r) {
        for (int c = 0; c < m.width(); ++c) {
            if (!m(r, c) || seen(r, c)) {
                continue;
            }
            ++n;
            seen(r, c) = 1;
            q.emplace_back(r, c);
            while (!q.empty()) {
                const auto [pr, pc] = q.front();
                q.pop_front();
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int nr = pr + dr, nc = pc + dc;
                        if (m.contains(nr, nc) && m(nr, nc) && !seen(nr, nc)) {
                            seen(nr, nc) = 1;
                            q.emplace_back(nr, nc);
                        }
                    }
                }
            }
        }
    }
    return n;
}

std::vector<double> central_difference(const std::function<double(std::span<const double>)>& f,
                                       std::vector<double> x, double h) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double orig = x[i];
        x[i] = orig + h;
        const double fp = f(x);
        x[i] = orig - h;
        const double fm = f(x);
        x[i] = orig;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

double max_relative_error(std::span<const double> a, std::span<const double> b, double floor) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max({std::abs(a[i]), std::abs(b[i]), floor});
        worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
    }
    return worst;
}

BinaryMask random_scribble(Rng& rng, int h, int w) {
    BinaryMask s(h, w);
    const int strokes = rng.integer(1, 4);
    for (int k = 0; k < strokes; ++k) {
        double r = rng.uniform(0.0, h - 1.0);
        double c = rng.uniform(0.0, w - 1.0);
        double angle = rng.uniform(0.0, 6.283185307179586);
        const int steps = rng.integer(5, h + w);
        for (int i = 0; i < steps; ++i) {
            const int ir = static_cast<int>(std::lround(r));
            const int ic = static_cast<int>(std::lround(c));
            if (!s.contains(ir, ic)) {
                break;
            }
            s(ir, ic) = 1;
            angle += rng.uniform(-0.3, 0.3);
            r += std::sin(angle);
            c += std::cos(angle);
        }
    }
    if (rng.uniform() < 0.3) {
        s(rng.integer(0, h - 1), rng.integer(0, w - 1)) = 1;
    }
    if (count_nonzero(s) == 0) {
        s(h / 2, w / 2) = 1;
    }
    return s;
}

BinaryMask random_blobs(Rng& rng, int h, int w, int blobs) {
    BinaryMask m(h, w);
    for (int k = 0; k < blobs; ++k) {
        const double cr = rng.uniform(0.0, h);
        const double cc = rng.uniform(0.0, w);
        const double rr = rng.uniform(1.0, std::max(2.0, h / 4.0));
        const double rc = rng.uniform(1.0, std::max(2.0, w / 4.0));
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                const double a = (r - cr) / rr;
                const double b = (c - cc) / rc;
                if (a * a + b * b <= 1.0) {
                    m(r, c) = 1;
                }
            }
        }
    }
    return m;
}

RasterImage random_image(Rng& rng, int h, int w) {
    RasterImage img(h, w);
    for (auto& v : img.values()) {
        v = rng.uniform();
    }
    return img;
}

TriLabel random_trilabel(Rng& rng, int h, int w) {
    TriLabel y(h, w);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = 0.5 * rng.integer(0, 2);
    }
    return y;
}

PredictionMap random_prediction(Rng& rng, int h, int w, double lo, double hi) {
    PredictionMap p(h, w);
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = rng.uniform(lo, hi);
    }
    return p;
}

BinaryMask random_mask(Rng& rng, int h, int w, double density) {
    BinaryMask m(h, w);
    for (std::size_t i = 0; i < m.size(); ++i) {
        m[i] = rng.uniform() < density ? 1 : 0;
    }
    return m;
}

BinaryLabelingProblem random_labeling_problem(Rng& rng, int max_nodes) {
    const int n = rng.integer(2, max_nodes);
    BinaryLabelingProblem p;
    p.cost_foreground.resize(static_cast<std::size_t>(n));
    p.cost_background.resize(static_cast<std::size_t>(n));
    p.hard.assign(static_cast<std::size_t>(n), -1);
    auto dyadic = [&](int max_units) { return rng.integer(0, max_units) / 16.0; };
    for (int i = 0; i < n; ++i) {
        p.cost_foreground[static_cast<std::size_t>(i)] = dyadic(64);
        p.cost_background[static_cast<std::size_t>(i)] = dyadic(64);
    }
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (rng.uniform() < 0.35) {
                p.edges.push_back({a, b, dyadic(48)});
            }
        }
    }
    const int fg = rng.integer(0, n - 1);
    int bg = rng.integer(0, n - 2);
    if (bg >= fg) {
        ++bg;
    }
    p.hard[static_cast<std::size_t>(fg)] = 1;
    p.hard[static_cast<std::size_t>(bg)] = 0;
    for (int i = 0; i < n; ++i) {
        if (p.hard[static_cast<std::size_t>(i)] < 0 && rng.uniform() < 0.15) {
            p.hard[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(rng.integer(0, 1));
        }
    }
    return p;
}

}  // namespace scribkit::oracle
