#pragma once

#include <vector>

#include "scribkit/raster.hpp"

namespace scribkit {

// Binary raster of 1-pixel-wide centerlines.
using ScribbleMap = BinaryMask;

struct KeyPointSet {
    std::vector<Pixel> intersections;
    std::vector<Pixel> endpoints;
};

// Zhang-Suen thinning (8-connectivity). Candidates from each sub-iteration are
// deleted sequentially and only while they remain simple points, so no
// connected component is split or erased. A final sweep removes the simple
// staircase corners Zhang-Suen leaves behind. Endpoints are never deleted.
ScribbleMap skeletonize(const BinaryMask& mask);

// Number of set 8-neighbors of (r,c); out-of-bounds counts as unset.
int neighbor_count(const BinaryMask& m, int r, int c);
// Number of 0->1 transitions walking the 8-neighborhood cyclically.
int crossing_number(const BinaryMask& m, int r, int c);
// Yokoi 8-connectivity number; a set pixel is simple iff this is 1.
int connectivity_number(const BinaryMask& m, int r, int c);

// Endpoints have exactly one neighbor. Intersections have >= 3 neighbors that
// form >= 3 separate runs around the pixel, which keeps the arms of a digital
// "+" from registering as junctions. Both lists are in row-major order.
KeyPointSet detect_keypoints(const ScribbleMap& s);

// Walks every branch starting at endpoints/intersections (row-major order of
// the start pixel) and emits a point every `stride` pixels of arc length,
// counting the start pixel as position 0. Closed loops and isolated pixels are
// walked from their first pixel in row-major order. Duplicates are dropped.
// Throws ParameterError if stride < 1.
std::vector<Pixel> sample_representative(const ScribbleMap& s, int stride);

}  // namespace scribkit
