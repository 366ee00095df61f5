#include "scribkit/raster.hpp"

#include <cmath>
#include <sstream>

#include "scribkit/error.hpp"

namespace scribkit {

TriLabel::TriLabel(int height, int width, double fill) : Grid<double>(height, width, fill) {}
TriLabel::TriLabel(int height, int width, std::vector<double> data)
    : Grid<double>(height, width, std::move(data)) {}

PredictionMap::PredictionMap(int height, int width, double fill) : Grid<double>(height, width, fill) {}
PredictionMap::PredictionMap(int height, int width, std::vector<double> data)
    : Grid<double>(height, width, std::move(data)) {}

RasterImage::RasterImage(int height, int width, double fill)
    : height_(height), width_(width),
      data_(static_cast<std::size_t>(height) * static_cast<std::size_t>(width) * kChannels, fill) {}

RasterImage::RasterImage(int height, int width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
    if (height < 0 || width < 0 || data_.size() != pixel_count() * kChannels) {
        throw ShapeError("RasterImage: data length does not match height*width*3");
    }
}

void require_same_shape(int h1, int w1, int h2, int w2, const std::string& what) {
    if (h1 != h2 || w1 != w2) {
        std::ostringstream os;
        os << what << ": shape mismatch " << h1 << "x" << w1 << " vs " << h2 << "x" << w2;
        throw ShapeError(os.str());
    }
}

void validate(const TriLabel& y) {
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!TriLabel::is_valid_value(y[i])) {
            std::ostringstream os;
            os << "tri-label value " << y[i] << " at pixel (" << i / static_cast<std::size_t>(y.width())
               << "," << i % static_cast<std::size_t>(y.width()) << ") is not one of {0, 0.5, 1}";
            throw FormatError(os.str());
        }
    }
}

void validate(const PredictionMap& p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::isfinite(p[i]) || p[i] < 0.0 || p[i] > 1.0) {
            std::ostringstream os;
            os << "prediction value " << p[i] << " at index " << i << " is outside [0,1]";
            throw FormatError(os.str());
        }
    }
}

void validate(const RasterImage& img) {
    auto v = img.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i]) || v[i] < 0.0 || v[i] > 1.0) {
            std::ostringstream os;
            os << "image value " << v[i] << " at index " << i << " is outside [0,1]";
            throw FormatError(os.str());
        }
    }
}

BinaryMask nonbackground_mask(const TriLabel& y) {
    BinaryMask m(y.height(), y.width());
    for (std::size_t i = 0; i < y.size(); ++i) {
        m[i] = y[i] > 0.0 ? 1 : 0;
    }
    return m;
}

Grid<std::uint8_t> tri_encode(const TriLabel& y) {
    validate(y);
    Grid<std::uint8_t> out(y.height(), y.width());
    for (std::size_t i = 0; i < y.size(); ++i) {
        out[i] = y[i] == TriLabel::kForeground ? 255 : (y[i] == TriLabel::kUncertain ? 128 : 0);
    }
    return out;
}

TriLabel tri_decode(const Grid<std::uint8_t>& raster) {
    TriLabel y(raster.height(), raster.width());
    for (int r = 0; r < raster.height(); ++r) {
        for (int c = 0; c < raster.width(); ++c) {
            const std::uint8_t v = raster(r, c);
            switch (v) {
                case 0: y(r, c) = TriLabel::kBackground; break;
                case 128: y(r, c) = TriLabel::kUncertain; break;
                case 255: y(r, c) = TriLabel::kForeground; break;
                default: {
                    std::ostringstream os;
                    os << "tri-label raster value " << static_cast<int>(v) << " at pixel (" << r << "," << c
                       << ") is not one of {0, 128, 255}";
                    throw FormatError(os.str());
                }
            }
        }
    }
    return y;
}

Grid<std::uint8_t> mask_encode(const BinaryMask& m) {
    Grid<std::uint8_t> out(m.height(), m.width());
    for (std::size_t i = 0; i < m.size(); ++i) {
        out[i] = m[i] ? 255 : 0;
    }
    return out;
}

BinaryMask mask_decode(const Grid<std::uint8_t>& raster) {
    BinaryMask m(raster.height(), raster.width());
    for (std::size_t i = 0; i < raster.size(); ++i) {
        m[i] = raster[i] ? 1 : 0;
    }
    return m;
}

TriLabel to_trilabel(const BinaryMask& m) {
    TriLabel y(m.height(), m.width());
    for (std::size_t i = 0; i < m.size(); ++i) {
        y[i] = m[i] ? TriLabel::kForeground : TriLabel::kBackground;
    }
    return y;
}

std::size_t count_nonzero(const BinaryMask& m) {
    std::size_t n = 0;
    for (auto v : m.values()) {
        n += v != 0;
    }
    return n;
}

}  // namespace scribkit
