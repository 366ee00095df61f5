#include "scribkit/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "scribkit/error.hpp"

namespace scribkit {
namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

// 1-D squared distance transform of f (length n) into d.
void transform_1d(const std::vector<std::int64_t>& f, std::vector<std::int64_t>& d,
                  std::vector<int>& v, std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[static_cast<std::size_t>(q)] >= kInf) {
            continue;
        }
        double s = 0.0;
        while (k >= 0) {
            const int p = v[static_cast<std::size_t>(k)];
            s = (static_cast<double>(f[static_cast<std::size_t>(q)] + static_cast<std::int64_t>(q) * q) -
                 static_cast<double>(f[static_cast<std::size_t>(p)] + static_cast<std::int64_t>(p) * p)) /
                (2.0 * (q - p));
            if (s <= z[static_cast<std::size_t>(k)]) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[static_cast<std::size_t>(k)] = q;
        z[static_cast<std::size_t>(k)] = k == 0 ? -std::numeric_limits<double>::infinity() : s;
        z[static_cast<std::size_t>(k) + 1] = std::numeric_limits<double>::infinity();
    }
    if (k < 0) {
        for (auto& x : d) {
            x = kInf;
        }
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[static_cast<std::size_t>(j) + 1] < q) {
            ++j;
        }
        const int p = v[static_cast<std::size_t>(j)];
        const std::int64_t dq = q - p;
        d[static_cast<std::size_t>(q)] = dq * dq + f[static_cast<std::size_t>(p)];
    }
}

}  // namespace

Grid<std::int64_t> squared_distance_transform(const ScribbleMap& s) {
    const int h = s.height();
    const int w = s.width();
    Grid<std::int64_t> out(h, w, kInf);
    for (std::size_t i = 0; i < s.size(); ++i) {
        out[i] = s[i] ? 0 : kInf;
    }
    const int n = std::max(h, w);
    std::vector<std::int64_t> f(static_cast<std::size_t>(n));
    std::vector<std::int64_t> d(static_cast<std::size_t>(n));
    std::vector<int> v(static_cast<std::size_t>(n));
    std::vector<double> z(static_cast<std::size_t>(n) + 1);

    // Columns first, then rows.
    f.resize(static_cast<std::size_t>(h));
    d.resize(static_cast<std::size_t>(h));
    for (int c = 0; c < w; ++c) {
        for (int r = 0; r < h; ++r) {
            f[static_cast<std::size_t>(r)] = out(r, c);
        }
        transform_1d(f, d, v, z);
        for (int r = 0; r < h; ++r) {
            out(r, c) = d[static_cast<std::size_t>(r)];
        }
    }
    f.resize(static_cast<std::size_t>(w));
    d.resize(static_cast<std::size_t>(w));
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            f[static_cast<std::size_t>(c)] = out(r, c);
        }
        transform_1d(f, d, v, z);
        for (int c = 0; c < w; ++c) {
            out(r, c) = d[static_cast<std::size_t>(c)];
        }
    }
    return out;
}

DistanceMap distance_transform(const ScribbleMap& s) {
    if (count_nonzero(s) == 0) {
        throw ParameterError("distance_transform: scribble is empty, distance is undefined");
    }
    const auto sq = squared_distance_transform(s);
    DistanceMap dis(s.height(), s.width());
    for (std::size_t i = 0; i < sq.size(); ++i) {
        dis[i] = std::sqrt(static_cast<double>(sq[i]));
    }
    return dis;
}

}  // namespace scribkit
