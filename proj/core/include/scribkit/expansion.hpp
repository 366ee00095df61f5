#pragma once

#include <optional>
#include <vector>

#include "scribkit/distance.hpp"
#include "scribkit/raster.hpp"
#include "scribkit/skeleton.hpp"

namespace scribkit {

struct ExpansionConfig {
    double b1 = 4.0;  // foreground buffer radius (pixels)
    double b2 = 8.0;  // uncertain buffer radius (pixels)
    int n_slic = 1024;
    double slic_compactness = 10.0;
    int slic_iterations = 10;
    // Color-contrast scale of the pairwise term; unset means the mean CIELAB
    // distance between adjacent superpixels.
    std::optional<double> gc_sigma;
    double gc_lambda = 1.0;
    // Use the seed-stride and background-interval formulas verbatim
    // (H*W numerators) instead of the sqrt(H*W) grid-interval form.
    bool literal_formulas = false;

    // Throws ParameterError on violated invariants.
    void validate() const;
};

struct SeedSet {
    std::vector<Pixel> foreground;
    std::vector<Pixel> background;
};

// 1 where DIS <= b1 (scribble pixels included), 0.5 where b1 < DIS <= b2,
// 0 beyond b2.
TriLabel statistic_expand(const DistanceMap& dis, const ExpansionConfig& cfg);

// Arc-length stride between representative foreground seeds.
int compute_stride(int height, int width, int n_slic, bool literal);

// Spacing of the background seed grid.
double background_interval(int height, int width, int n_slic, bool literal);

// Grid coordinates along one axis: half a step in, then every `step`. Steps
// longer than the axis collapse to its midpoint.
std::vector<int> grid_coordinates(int length, double step);

// Regular grid of candidates; those with DIS <= (b1+b2)/2 are dropped.
std::vector<Pixel> sample_background_seeds(const ScribbleMap& s, const DistanceMap& dis,
                                           const ExpansionConfig& cfg);

// Keypoints plus stride samples, deduplicated, in emission order.
std::vector<Pixel> sample_foreground_seeds(const ScribbleMap& s, const ExpansionConfig& cfg);

// 0.5 where y_s = 0 and y_c = 1, y_s elsewhere.
TriLabel merge_labels(const TriLabel& ys, const TriLabel& yc);

}  // namespace scribkit
