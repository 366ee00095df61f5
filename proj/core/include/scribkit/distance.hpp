#pragma once

#include <cstdint>

#include "scribkit/raster.hpp"
#include "scribkit/skeleton.hpp"

namespace scribkit {

// Euclidean distance (pixels) from each pixel to the nearest scribble pixel.
using DistanceMap = Grid<double>;

// Exact squared distances via the separable lower-envelope transform of
// Felzenszwalb & Huttenlocher, computed in integers.
Grid<std::int64_t> squared_distance_transform(const ScribbleMap& s);

// sqrt of the exact squared distance. Throws ParameterError on an empty scribble.
DistanceMap distance_transform(const ScribbleMap& s);

}  // namespace scribkit
