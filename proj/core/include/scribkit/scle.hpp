#pragma once

#include <string>

#include "scribkit/expansion.hpp"
#include "scribkit/graph_cut.hpp"
#include "scribkit/raster.hpp"
#include "scribkit/skeleton.hpp"
#include "scribkit/slic.hpp"

namespace scribkit {

struct ExpansionResult {
    TriLabel statistic;  // y_s
    TriLabel content;    // y_c
    TriLabel merged;     // y
    KeyPointSet keypoints;
    SeedSet seeds;
    SuperpixelMap superpixels;
    int stride = 0;
    double cut_cost = 0.0;
    double sigma = 0.0;
    bool graph_cut_fallback = false;
    std::string fallback_reason;
};

// Full label expansion for one image: distance transform, buffer expansion,
// seed extraction, seeded SLIC, superpixel graph cut, merge. When the graph
// cut has no usable seeds, y_c falls back to the statistic foreground.
ExpansionResult expand_labels(const RasterImage& img, const ScribbleMap& scribble, const ExpansionConfig& cfg);

}  // namespace scribkit
