#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "scribkit/losses.hpp"
#include "scribkit/raster.hpp"

namespace scribkit {

// Binary tensor blob:
//   "RTB1" | rank:u8 | dims: rank x u32 LE | payload: prod(dims) x f32 LE
// Rank is at most 4.
struct Tensor {
    std::vector<std::uint32_t> dims;
    std::vector<float> data;

    std::size_t element_count() const;
};

inline constexpr int kMaxTensorRank = 4;

std::vector<std::uint8_t> encode_tensor(const Tensor& t);
// Throws FormatError with the byte offset on a bad magic, rank > 4, or a
// truncated / oversized payload.
Tensor decode_tensor(std::span<const std::uint8_t> bytes);

void write_tensor(const std::filesystem::path& path, const Tensor& t);
Tensor read_tensor(const std::filesystem::path& path);

// H x W (rank 2) or H x W x 1 (rank 3).
Tensor to_tensor(const Grid<double>& map);
PredictionMap to_prediction(const Tensor& t);
// n x n x 2.
Tensor to_tensor(const PatchScoreMap& s);
PatchScoreMap to_patch_scores(const Tensor& t);

}  // namespace scribkit
