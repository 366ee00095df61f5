#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "scribkit/color.hpp"
#include "scribkit/expansion.hpp"
#include "scribkit/raster.hpp"

namespace scribkit {

struct Superpixel {
    double row = 0.0;  // centroid
    double col = 0.0;
    Lab mean_color;
    std::size_t pixel_count = 0;
};

struct SuperpixelMap {
    Grid<int> labels;                          // 0..size()-1 for every pixel
    std::vector<Superpixel> clusters;
    std::vector<std::pair<int, int>> adjacency;  // 4-adjacent pairs (a < b), sorted
    std::size_t initial_centers = 0;

    std::size_t size() const { return clusters.size(); }
};

// Seeded SLIC. Initial centers are the foreground seeds, then background
// seeds, then regular-grid points (interval sqrt(H*W/n_slic)) that have no
// seed within half an interval. Assignment uses squared CIELAB distance plus
// (spatial distance / interval)^2 * compactness^2 inside a window of one
// interval; ties go to the lowest center id. Afterwards every cluster keeps its
// largest 8-connected fragment, and orphan fragments join the largest adjacent
// cluster. Throws ParameterError with fewer than 2 centers.
SuperpixelMap slic(const RasterImage& img, const SeedSet& seeds, const ExpansionConfig& cfg);

// Image converted to CIELAB, row-major.
std::vector<Lab> to_lab(const RasterImage& img);

}  // namespace scribkit
