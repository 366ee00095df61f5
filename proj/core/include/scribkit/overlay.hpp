#pragma once

#include "scribkit/raster.hpp"

namespace scribkit {

// Foreground blended 50/50 with green, uncertain with yellow; background
// pixels are copied unchanged.
RasterImage render_overlay(const RasterImage& img, const TriLabel& y);
RasterImage render_overlay(const RasterImage& img, const BinaryMask& m);

}  // namespace scribkit
