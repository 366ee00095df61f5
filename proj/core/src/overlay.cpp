#include "scribkit/overlay.hpp"

#include <array>

namespace scribkit {
namespace {

constexpr std::array<double, 3> kGreen = {0.0, 1.0, 0.0};
constexpr std::array<double, 3> kYellow = {1.0, 1.0, 0.0};

void blend(RasterImage& out, int r, int c, const std::array<double, 3>& tint) {
    for (int ch = 0; ch < RasterImage::kChannels; ++ch) {
        out(r, c, ch) = 0.5 * out(r, c, ch) + 0.5 * tint[static_cast<std::size_t>(ch)];
    }
}

}  // namespace

RasterImage render_overlay(const RasterImage& img, const TriLabel& y) {
    require_same_shape(img, y, "render_overlay");
    validate(y);
    RasterImage out = img;
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            const double v = y(r, c);
            if (v == TriLabel::kForeground) {
                blend(out, r, c, kGreen);
            } else if (v == TriLabel::kUncertain) {
                blend(out, r, c, kYellow);
            }
        }
    }
    return out;
}

RasterImage render_overlay(const RasterImage& img, const BinaryMask& m) {
    require_same_shape(img, m, "render_overlay");
    RasterImage out = img;
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            if (m(r, c)) {
                blend(out, r, c, kGreen);
            }
        }
    }
    return out;
}

}  // namespace scribkit
