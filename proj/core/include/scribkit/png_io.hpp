#pragma once

#include <cstdint>
#include <filesystem>
#include <span>

#include "scribkit/raster.hpp"

namespace scribkit {

// Reads any PNG as 8-bit grayscale. Throws IoError / FormatError.
Grid<std::uint8_t> read_png_gray(const std::filesystem::path& path);
// Reads any PNG as RGB in [0,1] (value / 255).
RasterImage read_png_rgb(const std::filesystem::path& path);

void write_png_gray(const std::filesystem::path& path, const Grid<std::uint8_t>& g);
// Quantizes round(v * 255).
void write_png_rgb(const std::filesystem::path& path, const RasterImage& img);

TriLabel read_trilabel(const std::filesystem::path& path);
void write_trilabel(const std::filesystem::path& path, const TriLabel& y);
// Nonzero -> 1 on read; {0,255} on write.
BinaryMask read_mask(const std::filesystem::path& path);
void write_mask(const std::filesystem::path& path, const BinaryMask& m);

// Writes `bytes` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace scribkit
