#include "scribkit/slic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>

#include "scribkit/error.hpp"

namespace scribkit {
namespace {

struct Center {
    double row;
    double col;
    Lab color;
};

std::vector<Center> initial_centers(const std::vector<Lab>& lab, int h, int w, const SeedSet& seeds,
                                    double interval) {
    std::vector<Center> centers;
    std::set<Pixel> used;
    auto add = [&](const Pixel& p) {
        if (p.row < 0 || p.col < 0 || p.row >= h || p.col >= w) {
            throw ParameterError("slic: seed outside the image");
        }
        if (used.insert(p).second) {
            const auto idx = static_cast<std::size_t>(p.row) * static_cast<std::size_t>(w) +
                             static_cast<std::size_t>(p.col);
            centers.push_back({static_cast<double>(p.row), static_cast<double>(p.col), lab[idx]});
        }
    };
    for (const auto& p : seeds.foreground) {
        add(p);
    }
    for (const auto& p : seeds.background) {
        add(p);
    }
    const std::vector<Pixel> seeded(used.begin(), used.end());
    const double half = interval / 2.0;
    for (int r : grid_coordinates(h, interval)) {
        for (int c : grid_coordinates(w, interval)) {
            const bool covered = std::any_of(seeded.begin(), seeded.end(), [&](const Pixel& s) {
                return std::abs(s.row - r) < half && std::abs(s.col - c) < half;
            });
            if (!covered) {
                add({r, c});
            }
        }
    }
    return centers;
}

// Keeps the largest 8-connected fragment of every label and merges the rest
// (including unassigned pixels, label -1) into the largest adjacent cluster.
void enforce_connectivity(Grid<int>& labels, std::size_t n_centers) {
    const int h = labels.height();
    const int w = labels.width();
    Grid<int> comp(h, w, -1);
    std::vector<int> comp_label;
    std::vector<std::size_t> comp_size;
    std::vector<std::size_t> comp_first;
    std::deque<std::size_t> queue;

    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (comp(r, c) >= 0) {
                continue;
            }
            const int id = static_cast<int>(comp_label.size());
            const int lbl = labels(r, c);
            comp_label.push_back(lbl);
            comp_first.push_back(labels.index(r, c));
            std::size_t size = 0;
            comp(r, c) = id;
            queue.push_back(labels.index(r, c));
            while (!queue.empty()) {
                const std::size_t i = queue.front();
                queue.pop_front();
                ++size;
                const int pr = static_cast<int>(i / static_cast<std::size_t>(w));
                const int pc = static_cast<int>(i % static_cast<std::size_t>(w));
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int nr = pr + dr;
                        const int nc = pc + dc;
                        if ((dr || dc) && labels.contains(nr, nc) && comp(nr, nc) < 0 && labels(nr, nc) == lbl) {
                            comp(nr, nc) = id;
                            queue.push_back(labels.index(nr, nc));
                        }
                    }
                }
            }
            comp_size.push_back(size);
        }
    }

    const std::size_t n_comp = comp_label.size();
    std::vector<int> main_comp(n_centers, -1);
    for (std::size_t k = 0; k < n_comp; ++k) {
        const int lbl = comp_label[k];
        if (lbl < 0) {
            continue;
        }
        int& best = main_comp[static_cast<std::size_t>(lbl)];
        if (best < 0 || comp_size[k] > comp_size[static_cast<std::size_t>(best)]) {
            best = static_cast<int>(k);
        }
    }

    std::vector<int> assigned(n_comp, -1);
    std::vector<std::size_t> cluster_size(n_centers, 0);
    for (std::size_t lbl = 0; lbl < n_centers; ++lbl) {
        if (main_comp[lbl] >= 0) {
            assigned[static_cast<std::size_t>(main_comp[lbl])] = static_cast<int>(lbl);
            cluster_size[lbl] = comp_size[static_cast<std::size_t>(main_comp[lbl])];
        }
    }

    // Pixels of each orphan component, gathered once.
    std::vector<std::vector<std::size_t>> orphan_pixels(n_comp);
    bool any_orphan = false;
    for (std::size_t i = 0; i < comp.size(); ++i) {
        const auto k = static_cast<std::size_t>(comp[i]);
        if (assigned[k] < 0) {
            orphan_pixels[k].push_back(i);
            any_orphan = true;
        }
    }

    while (any_orphan) {
        any_orphan = false;
        bool progressed = false;
        for (std::size_t k = 0; k < n_comp; ++k) {
            if (assigned[k] >= 0) {
                continue;
            }
            int best = -1;
            for (std::size_t i : orphan_pixels[k]) {
                const int pr = static_cast<int>(i / static_cast<std::size_t>(w));
                const int pc = static_cast<int>(i % static_cast<std::size_t>(w));
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int nr = pr + dr;
                        const int nc = pc + dc;
                        if (!(dr || dc) || !labels.contains(nr, nc)) {
                            continue;
                        }
                        const int cand = assigned[static_cast<std::size_t>(comp(nr, nc))];
                        if (cand < 0) {
                            continue;
                        }
                        const auto cs = cluster_size[static_cast<std::size_t>(cand)];
                        if (best < 0 || cs > cluster_size[static_cast<std::size_t>(best)] ||
                            (cs == cluster_size[static_cast<std::size_t>(best)] && cand < best)) {
                            best = cand;
                        }
                    }
                }
            }
            if (best < 0) {
                any_orphan = true;
                continue;
            }
            assigned[k] = best;
            cluster_size[static_cast<std::size_t>(best)] += comp_size[k];
            progressed = true;
        }
        if (any_orphan && !progressed) {
            throw NumericError("slic: connectivity enforcement did not converge");
        }
    }

    for (std::size_t i = 0; i < labels.size(); ++i) {
        labels[i] = assigned[static_cast<std::size_t>(comp[i])];
    }
}

}  // namespace

std::vector<Lab> to_lab(const RasterImage& img) {
    std::vector<Lab> lab(img.pixel_count());
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            lab[static_cast<std::size_t>(r) * static_cast<std::size_t>(img.width()) + static_cast<std::size_t>(c)] =
                rgb_to_lab(img(r, c, 0), img(r, c, 1), img(r, c, 2));
        }
    }
    return lab;
}

SuperpixelMap slic(const RasterImage& img, const SeedSet& seeds, const ExpansionConfig& cfg) {
    cfg.validate();
    if (img.empty()) {
        throw ParameterError("slic: image is empty");
    }
    const int h = img.height();
    const int w = img.width();
    const auto lab = to_lab(img);
    const double interval =
        std::max(1.0, std::sqrt(static_cast<double>(h) * static_cast<double>(w) / cfg.n_slic));

    std::vector<Center> centers = initial_centers(lab, h, w, seeds, interval);
    if (centers.size() < 2) {
        throw ParameterError("slic: need at least 2 initial centers");
    }
    const std::size_t k = centers.size();

    const double spatial_weight = (cfg.slic_compactness * cfg.slic_compactness) / (interval * interval);
    const int radius = static_cast<int>(std::ceil(interval));
    Grid<int> labels(h, w, -1);
    Grid<double> best(h, w);

    struct Accum {
        double row = 0, col = 0, l = 0, a = 0, b = 0;
        std::size_t n = 0;
    };
    std::vector<Accum> acc(k);

    for (int iter = 0; iter < cfg.slic_iterations; ++iter) {
        std::fill(best.storage().begin(), best.storage().end(), std::numeric_limits<double>::infinity());
        std::fill(labels.storage().begin(), labels.storage().end(), -1);
        for (std::size_t id = 0; id < k; ++id) {
            const Center& ctr = centers[id];
            const int cr = static_cast<int>(std::lround(ctr.row));
            const int cc = static_cast<int>(std::lround(ctr.col));
            const int r0 = std::max(0, cr - radius);
            const int r1 = std::min(h - 1, cr + radius);
            const int c0 = std::max(0, cc - radius);
            const int c1 = std::min(w - 1, cc + radius);
            for (int r = r0; r <= r1; ++r) {
                for (int c = c0; c <= c1; ++c) {
                    const std::size_t i = labels.index(r, c);
                    const double dr = r - ctr.row;
                    const double dc = c - ctr.col;
                    const double d = lab_distance_sq(lab[i], ctr.color) + (dr * dr + dc * dc) * spatial_weight;
                    if (d < best[i]) {
                        best[i] = d;
                        labels[i] = static_cast<int>(id);
                    }
                }
            }
        }

        std::fill(acc.begin(), acc.end(), Accum{});
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                const std::size_t i = labels.index(r, c);
                const int lbl = labels[i];
                if (lbl < 0) {
                    continue;
                }
                Accum& a = acc[static_cast<std::size_t>(lbl)];
                a.row += r;
                a.col += c;
                a.l += lab[i].l;
                a.a += lab[i].a;
                a.b += lab[i].b;
                ++a.n;
            }
        }
        for (std::size_t id = 0; id < k; ++id) {
            const Accum& a = acc[id];
            if (a.n == 0) {
                continue;
            }
            const double n = static_cast<double>(a.n);
            centers[id] = {a.row / n, a.col / n, {a.l / n, a.a / n, a.b / n}};
        }
    }

    enforce_connectivity(labels, k);

    // Compact ids in order of the original center index.
    std::vector<int> remap(k, -1);
    std::vector<std::size_t> counts(k, 0);
    for (int v : labels.values()) {
        ++counts[static_cast<std::size_t>(v)];
    }
    int next = 0;
    for (std::size_t id = 0; id < k; ++id) {
        if (counts[id] > 0) {
            remap[id] = next++;
        }
    }
    for (auto& v : labels.storage()) {
        v = remap[static_cast<std::size_t>(v)];
    }

    SuperpixelMap sp;
    sp.initial_centers = k;
    sp.clusters.resize(static_cast<std::size_t>(next));
    std::vector<Accum> stats(static_cast<std::size_t>(next));
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::size_t i = labels.index(r, c);
            Accum& a = stats[static_cast<std::size_t>(labels[i])];
            a.row += r;
            a.col += c;
            a.l += lab[i].l;
            a.a += lab[i].a;
            a.b += lab[i].b;
            ++a.n;
        }
    }
    for (std::size_t id = 0; id < stats.size(); ++id) {
        const Accum& a = stats[id];
        const double n = static_cast<double>(a.n);
        sp.clusters[id] = {a.row / n, a.col / n, {a.l / n, a.a / n, a.b / n}, a.n};
    }

    std::set<std::pair<int, int>> adj;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const int a = labels(r, c);
            if (c + 1 < w && labels(r, c + 1) != a) {
                adj.insert(std::minmax(a, labels(r, c + 1)));
            }
            if (r + 1 < h && labels(r + 1, c) != a) {
                adj.insert(std::minmax(a, labels(r + 1, c)));
            }
        }
    }
    sp.adjacency.assign(adj.begin(), adj.end());
    sp.labels = std::move(labels);
    return sp;
}

}  // namespace scribkit
