#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "scribkit/expansion.hpp"
#include "scribkit/losses.hpp"
#include "scribkit/metrics.hpp"
#include "scribkit/mix.hpp"

namespace scribkit {

struct MetricsConfig {
    double tau = 0.5;
    Averaging averaging = Averaging::kMicro;
};

// JSON document with the sections "expansion", "mix", "loss" and "metrics".
// Absent keys keep their defaults; unknown keys are rejected.
struct PipelineConfig {
    ExpansionConfig expansion;
    MixConfig mix;
    LossWeights loss;
    MetricsConfig metrics;

    void validate() const;
};

// Throws FormatError on malformed JSON or unknown keys, ParameterError on
// invalid values.
PipelineConfig parse_config(std::string_view json_text);
PipelineConfig load_config(const std::filesystem::path& path);
// Full document with every key, suitable for parse_config().
std::string config_to_json(const PipelineConfig& cfg, int indent = 2);

}  // namespace scribkit
