#include "scribkit/skeleton.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <optional>
#include <set>
#include <utility>

#include "scribkit/error.hpp"

namespace scribkit {
namespace {

// Clockwise from north: P2..P9 in Zhang-Suen notation.
constexpr std::array<std::pair<int, int>, 8> kRing = {{
    {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1},
}};

// Row-major neighbor order used when starting branches.
constexpr std::array<std::pair<int, int>, 8> kRowMajor = {{
    {-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1},
}};

std::array<int, 8> ring_values(const BinaryMask& m, int r, int c) {
    std::array<int, 8> v{};
    for (std::size_t k = 0; k < kRing.size(); ++k) {
        const int rr = r + kRing[k].first;
        const int cc = c + kRing[k].second;
        v[k] = m.contains(rr, cc) && m(rr, cc) ? 1 : 0;
    }
    return v;
}

bool zhang_suen_candidate(const BinaryMask& m, int r, int c, int pass) {
    const auto p = ring_values(m, r, c);
    // p[0]=P2 (N), p[2]=P4 (E), p[4]=P6 (S), p[6]=P8 (W)
    int b = 0;
    int a = 0;
    for (std::size_t k = 0; k < 8; ++k) {
        b += p[k];
        a += (p[k] == 0 && p[(k + 1) % 8] == 1) ? 1 : 0;
    }
    if (b < 2 || b > 6 || a != 1) {
        return false;
    }
    if (pass == 0) {
        return p[0] * p[2] * p[4] == 0 && p[2] * p[4] * p[6] == 0;
    }
    return p[0] * p[2] * p[6] == 0 && p[0] * p[4] * p[6] == 0;
}

bool deletable(const BinaryMask& m, int r, int c) {
    return neighbor_count(m, r, c) >= 2 && connectivity_number(m, r, c) == 1;
}

bool adjacent(const Pixel& a, const Pixel& b) {
    return std::abs(a.row - b.row) <= 1 && std::abs(a.col - b.col) <= 1 && !(a == b);
}

}  // namespace

int neighbor_count(const BinaryMask& m, int r, int c) {
    const auto p = ring_values(m, r, c);
    int n = 0;
    for (int v : p) {
        n += v;
    }
    return n;
}

int crossing_number(const BinaryMask& m, int r, int c) {
    const auto p = ring_values(m, r, c);
    int a = 0;
    for (std::size_t k = 0; k < 8; ++k) {
        a += (p[k] == 0 && p[(k + 1) % 8] == 1) ? 1 : 0;
    }
    return a;
}

int connectivity_number(const BinaryMask& m, int r, int c) {
    // Yokoi order starts at east and runs counter-clockwise:
    // x1=E x2=NE x3=N x4=NW x5=W x6=SW x7=S x8=SE.
    const auto p = ring_values(m, r, c);
    const std::array<int, 8> x = {p[2], p[1], p[0], p[7], p[6], p[5], p[4], p[3]};
    int n = 0;
    for (int k = 0; k < 8; k += 2) {
        const int a = 1 - x[static_cast<std::size_t>(k)];
        const int b = 1 - x[static_cast<std::size_t>((k + 1) % 8)];
        const int d = 1 - x[static_cast<std::size_t>((k + 2) % 8)];
        n += a - a * b * d;
    }
    return n;
}

ScribbleMap skeletonize(const BinaryMask& mask) {
    ScribbleMap s(mask.height(), mask.width());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        s[i] = mask[i] ? 1 : 0;
    }

    std::vector<Pixel> marked;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int pass = 0; pass < 2; ++pass) {
            marked.clear();
            for (int r = 0; r < s.height(); ++r) {
                for (int c = 0; c < s.width(); ++c) {
                    if (s(r, c) && zhang_suen_candidate(s, r, c, pass)) {
                        marked.push_back({r, c});
                    }
                }
            }
            // marked pixels may have become endpoints meanwhile; they go anyway if still simple
            for (const Pixel& px : marked) {
                if (connectivity_number(s, px.row, px.col) == 1) {
                    s(px.row, px.col) = 0;
                    changed = true;
                }
            }
        }
    }

    // Staircase cleanup: drop remaining simple non-endpoint pixels.
    changed = true;
    while (changed) {
        changed = false;
        for (int r = 0; r < s.height(); ++r) {
            for (int c = 0; c < s.width(); ++c) {
                if (s(r, c) && deletable(s, r, c)) {
                    s(r, c) = 0;
                    changed = true;
                }
            }
        }
    }
    return s;
}

KeyPointSet detect_keypoints(const ScribbleMap& s) {
    KeyPointSet kp;
    for (int r = 0; r < s.height(); ++r) {
        for (int c = 0; c < s.width(); ++c) {
            if (!s(r, c)) {
                continue;
            }
            const int n = neighbor_count(s, r, c);
            if (n == 1) {
                kp.endpoints.push_back({r, c});
            } else if (n >= 3 && crossing_number(s, r, c) >= 3) {
                kp.intersections.push_back({r, c});
            }
        }
    }
    return kp;
}

std::vector<Pixel> sample_representative(const ScribbleMap& s, int stride) {
    if (stride < 1) {
        throw ParameterError("sample_representative: stride must be >= 1");
    }
    const KeyPointSet kp = detect_keypoints(s);
    Grid<std::uint8_t> is_node(s.height(), s.width());
    std::vector<Pixel> nodes;
    nodes.reserve(kp.endpoints.size() + kp.intersections.size());
    for (const auto& p : kp.endpoints) {
        nodes.push_back(p);
    }
    for (const auto& p : kp.intersections) {
        nodes.push_back(p);
    }
    std::sort(nodes.begin(), nodes.end());
    for (const auto& p : nodes) {
        is_node(p.row, p.col) = 1;
    }

    Grid<std::uint8_t> visited(s.height(), s.width());
    std::set<std::pair<Pixel, Pixel>> node_links;
    std::set<Pixel> emitted_set;
    std::vector<Pixel> out;

    auto emit = [&](const Pixel& p) {
        if (emitted_set.insert(p).second) {
            out.push_back(p);
        }
    };

    auto set_at = [&](int r, int c) { return s.contains(r, c) && s(r, c) != 0; };

    // Follows a branch from `start` through `first`; stops on reaching a node
    // (other than the start) or when no unvisited continuation remains.
    auto walk = [&](Pixel start, Pixel first) {
        emit(start);
        Pixel prev = start;
        Pixel cur = first;
        long pos = 1;
        while (true) {
            if (pos % stride == 0) {
                emit(cur);
            }
            if (is_node(cur.row, cur.col)) {
                return;
            }
            visited(cur.row, cur.col) = 1;

            // A neighboring node ends the branch; otherwise prefer a step
            // that does not cut the corner around the previous pixel.
            std::optional<Pixel> node_next;
            std::optional<Pixel> straight_next;
            std::optional<Pixel> any_next;
            for (const auto& [dr, dc] : kRowMajor) {
                const Pixel nb{cur.row + dr, cur.col + dc};
                if (!set_at(nb.row, nb.col) || nb == prev) {
                    continue;
                }
                if (is_node(nb.row, nb.col)) {
                    if (!node_next) {
                        node_next = nb;
                    }
                    continue;
                }
                if (visited(nb.row, nb.col)) {
                    continue;
                }
                if (!adjacent(nb, prev) && !straight_next) {
                    straight_next = nb;
                }
                if (!any_next) {
                    any_next = nb;
                }
            }
            const std::optional<Pixel> next = node_next ? node_next : (straight_next ? straight_next : any_next);
            if (!next) {
                return;
            }
            prev = cur;
            cur = *next;
            ++pos;
        }
    };

    for (const Pixel& n : nodes) {
        for (const auto& [dr, dc] : kRowMajor) {
            const Pixel nb{n.row + dr, n.col + dc};
            if (!set_at(nb.row, nb.col)) {
                continue;
            }
            if (is_node(nb.row, nb.col)) {
                const auto key = std::minmax(n, nb);
                if (node_links.insert({key.first, key.second}).second) {
                    walk(n, nb);
                }
                continue;
            }
            if (!visited(nb.row, nb.col)) {
                walk(n, nb);
            }
        }
    }

    // Loops without nodes, isolated pixels, and anything the node walks skipped.
    for (int r = 0; r < s.height(); ++r) {
        for (int c = 0; c < s.width(); ++c) {
            if (!s(r, c) || visited(r, c) || is_node(r, c)) {
                continue;
            }
            const Pixel start{r, c};
            visited(r, c) = 1;
            std::optional<Pixel> first;
            for (const auto& [dr, dc] : kRowMajor) {
                const Pixel nb{r + dr, c + dc};
                if (set_at(nb.row, nb.col) && !visited(nb.row, nb.col) && !is_node(nb.row, nb.col)) {
                    first = nb;
                    break;
                }
            }
            if (first) {
                walk(start, *first);
            } else {
                emit(start);
            }
        }
    }
    return out;
}

}  // namespace scribkit
