#include "scribkit/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "scribkit/error.hpp"

namespace scribkit {
namespace {

std::vector<std::uint8_t> read_png(const std::filesystem::path& path, png_uint_32 format, int& height,
                                   int& width) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str())) {
        std::string msg = "cannot read PNG " + path.string() + ": " + image.message;
        png_image_free(&image);
        if (!std::filesystem::exists(path)) {
            throw IoError(msg);
        }
        throw FormatError(msg);
    }
    image.format = format;
    std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
        std::string msg = "cannot decode PNG " + path.string() + ": " + image.message;
        png_image_free(&image);
        throw FormatError(msg);
    }
    height = static_cast<int>(image.height);
    width = static_cast<int>(image.width);
    return buf;
}

void write_png(const std::filesystem::path& path, png_uint_32 format, int height, int width,
               const std::uint8_t* pixels) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = format;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels, 0, nullptr)) {
        throw IoError("cannot encode PNG " + path.string() + ": " + image.message);
    }
    std::vector<std::uint8_t> bytes(size);
    if (!png_image_write_to_memory(&image, bytes.data(), &size, 0, pixels, 0, nullptr)) {
        throw IoError("cannot encode PNG " + path.string() + ": " + image.message);
    }
    bytes.resize(size);
    write_file_atomic(path, bytes);
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    static std::atomic<unsigned> counter{0};
    auto tmp = path;
    tmp += ".tmp" + std::to_string(counter.fetch_add(1));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            throw IoError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

Grid<std::uint8_t> read_png_gray(const std::filesystem::path& path) {
    int h = 0, w = 0;
    auto buf = read_png(path, PNG_FORMAT_GRAY, h, w);
    return Grid<std::uint8_t>(h, w, std::move(buf));
}

RasterImage read_png_rgb(const std::filesystem::path& path) {
    int h = 0, w = 0;
    const auto buf = read_png(path, PNG_FORMAT_RGB, h, w);
    std::vector<double> data(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) {
        data[i] = buf[i] / 255.0;
    }
    return RasterImage(h, w, std::move(data));
}

void write_png_gray(const std::filesystem::path& path, const Grid<std::uint8_t>& g) {
    write_png(path, PNG_FORMAT_GRAY, g.height(), g.width(), g.storage().data());
}

void write_png_rgb(const std::filesystem::path& path, const RasterImage& img) {
    const auto v = img.values();
    std::vector<std::uint8_t> buf(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = std::round(std::clamp(v[i], 0.0, 1.0) * 255.0);
        buf[i] = static_cast<std::uint8_t>(x);
    }
    write_png(path, PNG_FORMAT_RGB, img.height(), img.width(), buf.data());
}

TriLabel read_trilabel(const std::filesystem::path& path) {
    try {
        return tri_decode(read_png_gray(path));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_trilabel(const std::filesystem::path& path, const TriLabel& y) {
    write_png_gray(path, tri_encode(y));
}

BinaryMask read_mask(const std::filesystem::path& path) {
    return mask_decode(read_png_gray(path));
}

void write_mask(const std::filesystem::path& path, const BinaryMask& m) {
    write_png_gray(path, mask_encode(m));
}

}  // namespace scribkit
