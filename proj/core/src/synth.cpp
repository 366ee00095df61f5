#include "scribkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "scribkit/error.hpp"
#include "scribkit/png_io.hpp"
#include "scribkit/rng.hpp"
#include "scribkit/skeleton.hpp"

namespace scribkit {
namespace {

enum Stream : std::uint64_t { kLayout = 1, kTexture = 2, kDistractor = 3 };

Point2 catmull_rom(const Point2& p0, const Point2& p1, const Point2& p2, const Point2& p3, double t) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    auto eval = [&](double a, double b, double c, double d) {
        return 0.5 * ((2.0 * b) + (-a + c) * t + (2.0 * a - 5.0 * b + 4.0 * c - d) * t2 +
                      (-a + 3.0 * b - 3.0 * c + d) * t3);
    };
    return {eval(p0.row, p1.row, p2.row, p3.row), eval(p0.col, p1.col, p2.col, p3.col)};
}

double dist(const Point2& a, const Point2& b) {
    return std::hypot(a.row - b.row, a.col - b.col);
}

Point2 point_on_side(int side, double t, int h, int w, double margin) {
    const double top = margin;
    const double bottom = h - 1 - margin;
    const double left = margin;
    const double right = w - 1 - margin;
    switch (side) {
        case 0: return {top, left + t * (right - left)};
        case 1: return {top + t * (bottom - top), right};
        case 2: return {bottom, left + t * (right - left)};
        default: return {top + t * (bottom - top), left};
    }
}

// Smooth side-to-side path through jittered waypoints.
std::vector<Point2> make_path(Rng& rng, int h, int w, double curvature, double margin) {
    const int s0 = rng.integer(0, 3);
    const int s1 = (s0 + rng.integer(1, 3)) % 4;
    const Point2 a = point_on_side(s0, rng.uniform(0.1, 0.9), h, w, margin);
    const Point2 b = point_on_side(s1, rng.uniform(0.1, 0.9), h, w, margin);
    const double len = dist(a, b);
    const double nr = len > 0.0 ? -(b.col - a.col) / len : 0.0;
    const double nc = len > 0.0 ? (b.row - a.row) / len : 0.0;

    std::vector<Point2> ctrl{a};
    constexpr int kWaypoints = 4;
    for (int k = 1; k <= kWaypoints; ++k) {
        const double f = static_cast<double>(k) / (kWaypoints + 1);
        const double off = curvature * len * (rng.uniform() - 0.5);
        Point2 p{a.row + f * (b.row - a.row) + off * nr, a.col + f * (b.col - a.col) + off * nc};
        p.row = std::clamp(p.row, margin, h - 1 - margin);
        p.col = std::clamp(p.col, margin, w - 1 - margin);
        ctrl.push_back(p);
    }
    ctrl.push_back(b);

    std::vector<Point2> out{ctrl.front()};
    for (std::size_t i = 0; i + 1 < ctrl.size(); ++i) {
        const Point2& p0 = ctrl[i == 0 ? 0 : i - 1];
        const Point2& p1 = ctrl[i];
        const Point2& p2 = ctrl[i + 1];
        const Point2& p3 = ctrl[std::min(i + 2, ctrl.size() - 1)];
        const int steps = std::max(8, static_cast<int>(std::ceil(dist(p1, p2) * 4.0)));
        for (int s = 1; s <= steps; ++s) {
            Point2 q = catmull_rom(p0, p1, p2, p3, static_cast<double>(s) / steps);
            q.row = std::clamp(q.row, 0.0, h - 1.0);
            q.col = std::clamp(q.col, 0.0, w - 1.0);
            out.push_back(q);
        }
    }
    return out;
}

double polyline_length(const std::vector<Point2>& pts) {
    double len = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        len += dist(pts[i - 1], pts[i]);
    }
    return len;
}

double clamp01(double v) {
    return std::clamp(v, 0.0, 1.0);
}

void paint(RasterImage& img, const BinaryMask& where, const double rgb[3], double noise, Rng& rng) {
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            if (!where(r, c)) {
                continue;
            }
            const double n = noise * (rng.uniform() - 0.5);
            for (int ch = 0; ch < 3; ++ch) {
                img(r, c, ch) = clamp01(rgb[ch] + n);
            }
        }
    }
}

}  // namespace

void SceneSpec::validate() const {
    if (height < 1 || width < 1) {
        throw ParameterError("scene spec: zero-area image");
    }
    if (n_roads < 1) {
        throw ParameterError("scene spec: n_roads must be >= 1");
    }
    const double limit = std::min(height, width) / 4.0;
    if (!(width_min >= 1.0) || !(width_max >= width_min) || width_max > limit) {
        throw ParameterError("scene spec: width range must lie within [1, min(H,W)/4]");
    }
    if (!(curvature >= 0.0)) {
        throw ParameterError("scene spec: curvature must be >= 0");
    }
    if (distractors < 0) {
        throw ParameterError("scene spec: distractors must be >= 0");
    }
}

void rasterize_stroke(BinaryMask& mask, const std::vector<Point2>& polyline, double width) {
    const double r = width / 2.0;
    const double r2 = r * r;
    auto stamp_segment = [&](const Point2& a, const Point2& b) {
        const int r0 = std::max(0, static_cast<int>(std::floor(std::min(a.row, b.row) - r)));
        const int r1 = std::min(mask.height() - 1, static_cast<int>(std::ceil(std::max(a.row, b.row) + r)));
        const int c0 = std::max(0, static_cast<int>(std::floor(std::min(a.col, b.col) - r)));
        const int c1 = std::min(mask.width() - 1, static_cast<int>(std::ceil(std::max(a.col, b.col) + r)));
        const double dr = b.row - a.row;
        const double dc = b.col - a.col;
        const double len2 = dr * dr + dc * dc;
        for (int i = r0; i <= r1; ++i) {
            for (int j = c0; j <= c1; ++j) {
                double t = len2 > 0.0 ? ((i - a.row) * dr + (j - a.col) * dc) / len2 : 0.0;
                t = std::clamp(t, 0.0, 1.0);
                const double pr = a.row + t * dr - i;
                const double pc = a.col + t * dc - j;
                if (pr * pr + pc * pc <= r2) {
                    mask(i, j) = 1;
                }
            }
        }
    };
    if (polyline.size() == 1) {
        stamp_segment(polyline[0], polyline[0]);
    }
    for (std::size_t i = 1; i < polyline.size(); ++i) {
        stamp_segment(polyline[i - 1], polyline[i]);
    }
}

Scene gen_scene(const SceneSpec& spec) {
    spec.validate();
    const int h = spec.height;
    const int w = spec.width;
    Rng layout(spec.seed, kLayout);
    Rng texture(spec.seed, kTexture);
    Rng distract(spec.seed, kDistractor);

    Scene scene;
    scene.image = RasterImage(h, w);
    scene.mask = BinaryMask(h, w);

    const double base[3] = {texture.uniform(0.22, 0.34), texture.uniform(0.32, 0.46), texture.uniform(0.16, 0.26)};
    const double pixel_noise = spec.bg_texture == BackgroundTexture::kFlat ? 0.0 : 0.08;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            for (int ch = 0; ch < 3; ++ch) {
                const double n = pixel_noise > 0.0 ? pixel_noise * (texture.uniform() - 0.5) : 0.0;
                scene.image(r, c, ch) = clamp01(base[ch] + n);
            }
        }
    }
    if (spec.bg_texture == BackgroundTexture::kBlotches) {
        const int blotches = std::max(3, h * w / 4096);
        for (int k = 0; k < blotches; ++k) {
            const double cr = texture.uniform(0.0, h);
            const double cc = texture.uniform(0.0, w);
            const double rad = texture.uniform(4.0, std::max(5.0, std::min(h, w) / 8.0));
            const double shift[3] = {texture.uniform(-0.1, 0.1), texture.uniform(-0.1, 0.1),
                                     texture.uniform(-0.08, 0.08)};
            for (int r = std::max(0, static_cast<int>(cr - rad)); r < std::min(h, static_cast<int>(cr + rad) + 1); ++r) {
                for (int c = std::max(0, static_cast<int>(cc - rad)); c < std::min(w, static_cast<int>(cc + rad) + 1);
                     ++c) {
                    if ((r - cr) * (r - cr) + (c - cc) * (c - cc) <= rad * rad) {
                        for (int ch = 0; ch < 3; ++ch) {
                            scene.image(r, c, ch) = clamp01(scene.image(r, c, ch) + shift[ch]);
                        }
                    }
                }
            }
        }
    }

    const double margin = std::ceil(spec.width_max / 2.0) + 1.0;

    // Distractors go under the roads and never touch the mask.
    for (int k = 0; k < spec.distractors; ++k) {
        const auto path = make_path(distract, h, w, spec.curvature * 1.5, margin);
        BinaryMask stroke(h, w);
        rasterize_stroke(stroke, path, distract.uniform(1.0, 2.5));
        const double g = distract.uniform(0.36, 0.48);
        const double rgb[3] = {g + 0.04, g, g - 0.03};
        paint(scene.image, stroke, rgb, 0.04, distract);
    }

    for (int k = 0; k < spec.n_roads; ++k) {
        RoadStroke road;
        road.polyline = make_path(layout, h, w, spec.curvature, margin);
        road.width = layout.uniform(spec.width_min, spec.width_max);
        road.arc_length = polyline_length(road.polyline);
        const double g = layout.uniform(0.58, 0.78);
        BinaryMask stroke(h, w);
        rasterize_stroke(stroke, road.polyline, road.width);
        const double rgb[3] = {g, g, g * 0.98};
        paint(scene.image, stroke, rgb, 0.05, texture);
        for (std::size_t i = 0; i < stroke.size(); ++i) {
            scene.mask[i] = static_cast<std::uint8_t>(scene.mask[i] | stroke[i]);
        }
        scene.roads.push_back(std::move(road));
    }
    return scene;
}

std::string to_string(BackgroundTexture t) {
    switch (t) {
        case BackgroundTexture::kFlat: return "flat";
        case BackgroundTexture::kNoise: return "noise";
        case BackgroundTexture::kBlotches: return "blotches";
    }
    return "noise";
}

BackgroundTexture texture_from_string(const std::string& s) {
    if (s == "flat") {
        return BackgroundTexture::kFlat;
    }
    if (s == "noise") {
        return BackgroundTexture::kNoise;
    }
    if (s == "blotches") {
        return BackgroundTexture::kBlotches;
    }
    throw ParameterError("unknown background texture \"" + s + "\" (flat, noise, blotches)");
}

std::uint64_t scene_seed(std::uint64_t dataset_seed, int index) {
    return splitmix64(dataset_seed + static_cast<std::uint64_t>(index));
}

std::vector<DatasetEntry> gen_dataset(const SceneSpec& tmpl, int count, std::uint64_t seed,
                                      const std::filesystem::path& out_dir) {
    if (count < 1) {
        throw ParameterError("gen_dataset: count must be >= 1");
    }
    tmpl.validate();
    namespace fs = std::filesystem;
    std::error_code ec;
    for (const char* sub : {"images", "masks", "scribbles"}) {
        fs::create_directories(out_dir / sub, ec);
        if (ec) {
            throw IoError("cannot create " + (out_dir / sub).string() + ": " + ec.message());
        }
    }

    auto spec_json = [](const SceneSpec& s) {
        return nlohmann::json{
            {"seed", s.seed},
            {"height", s.height},
            {"width", s.width},
            {"n_roads", s.n_roads},
            {"width_range", {s.width_min, s.width_max}},
            {"curvature", s.curvature},
            {"bg_texture", to_string(s.bg_texture)},
            {"distractors", s.distractors},
        };
    };

    std::vector<DatasetEntry> entries;
    nlohmann::json scenes = nlohmann::json::array();
    for (int i = 0; i < count; ++i) {
        DatasetEntry e;
        char id[32];
        std::snprintf(id, sizeof id, "scene_%04d", i);
        e.id = id;
        e.spec = tmpl;
        e.spec.seed = scene_seed(seed, i);
        e.image = "images/" + e.id + ".png";
        e.mask = "masks/" + e.id + ".png";
        e.scribble = "scribbles/" + e.id + ".png";

        const Scene scene = gen_scene(e.spec);
        write_png_rgb(out_dir / e.image, scene.image);
        write_mask(out_dir / e.mask, scene.mask);
        write_mask(out_dir / e.scribble, skeletonize(scene.mask));

        scenes.push_back({{"id", e.id},
                          {"image", e.image},
                          {"mask", e.mask},
                          {"scribble", e.scribble},
                          {"spec", spec_json(e.spec)}});
        entries.push_back(std::move(e));
    }
    const nlohmann::json manifest{
        {"dataset_seed", seed},
        {"count", count},
        {"rng", "mt19937_64 seeded by splitmix64; scene i uses splitmix64(dataset_seed + i)"},
        {"template", spec_json(tmpl)},
        {"scenes", scenes},
    };
    const std::string text = manifest.dump(2) + "\n";
    write_file_atomic(out_dir / "manifest.json",
                      std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    return entries;
}

}  // namespace scribkit
