#pragma once

#include <cstdint>
#include <string>

#include "support.hpp"

namespace scribkit::cli {

struct MakeScribblesArgs {
    fs::path masks;
    fs::path out;
};
void run_make_scribbles(const MakeScribblesArgs& a, Context& ctx);

struct ExpandArgs {
    fs::path images;
    fs::path scribbles;
    fs::path out;
};
void run_expand(const ExpandArgs& a, Context& ctx);

struct MixArgs {
    fs::path images;
    fs::path labels;
    std::string pairs;  // pairs.json or random:SEED
    fs::path out;
};
void run_mix(const MixArgs& a, Context& ctx);

struct LossEvalArgs {
    fs::path pred;
    fs::path labels;
    fs::path mixed;  // optional
    std::string weights;  // l1=..,l2=..
    fs::path out;
    fs::path grads;  // optional
};
void run_loss_eval(const LossEvalArgs& a, Context& ctx);

struct MetricsArgs {
    fs::path pred;
    fs::path gt;
    std::optional<double> tau;
    std::string averaging;  // empty: from config
    fs::path out;
};
void run_metrics(const MetricsArgs& a, Context& ctx);

struct SynthArgs {
    int count = 8;
    std::uint64_t seed = 1;
    int size = 256;
    int roads = 3;
    double width_min = 3.0;
    double width_max = 8.0;
    double curvature = 0.25;
    std::string texture = "noise";
    int distractors = 0;
    fs::path out;
};
void run_synth(const SynthArgs& a, Context& ctx);

struct OverlayArgs {
    fs::path image;
    fs::path label;
    fs::path out;
    bool binary = false;
};
void run_overlay(const OverlayArgs& a, Context& ctx);

struct SelftestArgs {
    double scale = 1.0;
    std::string filter;
};
// Returns the number of failed criteria.
int run_selftest(const SelftestArgs& a, Context& ctx);

}  // namespace scribkit::cli
