#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "scribkit/raster.hpp"

namespace scribkit {

enum class BackgroundTexture { kFlat, kNoise, kBlotches };

struct SceneSpec {
    std::uint64_t seed = 1;
    int height = 256;
    int width = 256;
    int n_roads = 3;
    double width_min = 3.0;
    double width_max = 8.0;
    // Lateral waypoint jitter as a fraction of the road's chord length.
    double curvature = 0.25;
    BackgroundTexture bg_texture = BackgroundTexture::kNoise;
    int distractors = 0;

    void validate() const;
};

struct Point2 {
    double row = 0.0;
    double col = 0.0;
};

struct RoadStroke {
    std::vector<Point2> polyline;  // densely sampled Catmull-Rom spline
    double width = 0.0;
    double arc_length = 0.0;
};

struct Scene {
    RasterImage image;
    BinaryMask mask;  // union of road strokes only
    std::vector<RoadStroke> roads;
};

// Deterministic in the spec. Road layout, distractors and texture draw from
// separate random streams, so adding distractors leaves the mask unchanged.
Scene gen_scene(const SceneSpec& spec);

// Marks every pixel whose center lies within width/2 of the polyline.
void rasterize_stroke(BinaryMask& mask, const std::vector<Point2>& polyline, double width);

std::string to_string(BackgroundTexture t);
BackgroundTexture texture_from_string(const std::string& s);

struct DatasetEntry {
    std::string id;
    SceneSpec spec;
    std::string image;
    std::string mask;
    std::string scribble;
};

// Writes images/, masks/, scribbles/ (skeletonized masks) and manifest.json
// under `out_dir`. Scene i uses seed splitmix64(seed + i).
std::vector<DatasetEntry> gen_dataset(const SceneSpec& tmpl, int count, std::uint64_t seed,
                                      const std::filesystem::path& out_dir);

std::uint64_t scene_seed(std::uint64_t dataset_seed, int index);

}  // namespace scribkit
