#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include "scribkit/error.hpp"
#include <string>
#include <utility>
#include <vector>

namespace scribkit {

// Pixel coordinate, row-major convention.
struct Pixel {
    int row = 0;
    int col = 0;

    friend bool operator==(const Pixel&, const Pixel&) = default;
    friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

// Row-major single-channel map.
template <typename T>
class Grid {
public:
    using value_type = T;

    Grid() = default;
    Grid(int height, int width, T fill = T{})
        : height_(height), width_(width),
          data_(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill) {}
    Grid(int height, int width, std::vector<T> data);

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& operator()(int r, int c) { return data_[index(r, c)]; }
    const T& operator()(int r, int c) const { return data_[index(r, c)]; }
    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    std::size_t index(int r, int c) const {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(c);
    }
    bool contains(int r, int c) const { return r >= 0 && c >= 0 && r < height_ && c < width_; }

    std::span<T> values() { return data_; }
    std::span<const T> values() const { return data_; }
    std::vector<T>& storage() { return data_; }
    const std::vector<T>& storage() const { return data_; }

    template <typename U>
    bool same_shape(const Grid<U>& other) const {
        return height_ == other.height() && width_ == other.width();
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<T> data_;
};

template <typename T>
Grid<T>::Grid(int height, int width, std::vector<T> data)
    : height_(height), width_(width), data_(std::move(data)) {
    if (height < 0 || width < 0 ||
        data_.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
        throw ShapeError("Grid: data length does not match height*width");
    }
}

// {0,1} per pixel.
using BinaryMask = Grid<std::uint8_t>;

// Values exactly in {0, 0.5, 1}: background, uncertain, foreground.
class TriLabel : public Grid<double> {
public:
    static constexpr double kBackground = 0.0;
    static constexpr double kUncertain = 0.5;
    static constexpr double kForeground = 1.0;

    TriLabel() = default;
    TriLabel(int height, int width, double fill = kBackground);
    TriLabel(int height, int width, std::vector<double> data);

    static bool is_valid_value(double v) {
        return v == kBackground || v == kUncertain || v == kForeground;
    }
};

// Probabilities in [0,1].
class PredictionMap : public Grid<double> {
public:
    PredictionMap() = default;
    PredictionMap(int height, int width, double fill = 0.0);
    PredictionMap(int height, int width, std::vector<double> data);
};

// H x W x 3 RGB in [0,1], interleaved row-major.
class RasterImage {
public:
    static constexpr int kChannels = 3;

    RasterImage() = default;
    RasterImage(int height, int width, double fill = 0.0);
    RasterImage(int height, int width, std::vector<double> data);

    int height() const { return height_; }
    int width() const { return width_; }
    int channels() const { return kChannels; }
    std::size_t pixel_count() const {
        return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
    }
    bool empty() const { return data_.empty(); }

    double& operator()(int r, int c, int ch) { return data_[offset(r, c) + static_cast<std::size_t>(ch)]; }
    double operator()(int r, int c, int ch) const {
        return data_[offset(r, c) + static_cast<std::size_t>(ch)];
    }
    std::size_t offset(int r, int c) const {
        return (static_cast<std::size_t>(r) * static_cast<std::size_t>(width_) +
                static_cast<std::size_t>(c)) * kChannels;
    }

    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }

    template <typename U>
    bool same_shape(const Grid<U>& g) const {
        return height_ == g.height() && width_ == g.width();
    }
    bool same_shape(const RasterImage& o) const { return height_ == o.height_ && width_ == o.width_; }

    friend bool operator==(const RasterImage&, const RasterImage&) = default;

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<double> data_;
};

// Throws ShapeError naming `what` if the shapes differ.
void require_same_shape(int h1, int w1, int h2, int w2, const std::string& what);

template <typename A, typename B>
void require_same_shape(const A& a, const B& b, const std::string& what) {
    require_same_shape(a.height(), a.width(), b.height(), b.width(), what);
}

// Throws FormatError if any value is outside {0, 0.5, 1}.
void validate(const TriLabel& y);
// Throws FormatError if any value is outside [0,1] or non-finite.
void validate(const PredictionMap& p);
void validate(const RasterImage& img);

// alpha = I(y > 0): 1 on foreground and uncertain pixels.
BinaryMask nonbackground_mask(const TriLabel& y);

// 0 <-> 0, 0.5 <-> 128, 1 <-> 255.
Grid<std::uint8_t> tri_encode(const TriLabel& y);
// Throws FormatError naming the first pixel whose value is not 0, 128 or 255.
TriLabel tri_decode(const Grid<std::uint8_t>& raster);

// Mask <-> {0,255} gray raster. Decoding treats any nonzero value as 1.
Grid<std::uint8_t> mask_encode(const BinaryMask& m);
BinaryMask mask_decode(const Grid<std::uint8_t>& raster);

TriLabel to_trilabel(const BinaryMask& m);

std::size_t count_nonzero(const BinaryMask& m);

}  // namespace scribkit
