#include "scribkit/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "scribkit/error.hpp"

namespace scribkit {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& section, const std::set<std::string>& allowed) {
    if (!obj.is_object()) {
        throw FormatError("config: \"" + section + "\" must be an object");
    }
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) {
            throw FormatError("config: unknown key \"" + (section.empty() ? key : section + "." + key) + "\"");
        }
    }
}

template <typename T>
void read_key(const json& obj, const char* key, T& out, const std::string& section) {
    if (!obj.contains(key)) {
        return;
    }
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw FormatError("config: bad value for \"" + section + "." + key + "\": " + e.what());
    }
}

// The gate threshold accepts a number or the string "inf".
double read_threshold(const json& v) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "infinity") {
            return std::numeric_limits<double>::infinity();
        }
        throw FormatError("config: mix.t must be a number or \"inf\"");
    }
    if (!v.is_number()) {
        throw FormatError("config: mix.t must be a number or \"inf\"");
    }
    return v.get<double>();
}

}  // namespace

void PipelineConfig::validate() const {
    expansion.validate();
    mix.validate();
    loss.validate();
    if (!(metrics.tau > 0.0 && metrics.tau < 1.0)) {
        throw ParameterError("config: metrics.tau must lie in (0,1)");
    }
}

PipelineConfig parse_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("config: malformed JSON: ") + e.what());
    }
    PipelineConfig cfg;
    reject_unknown(doc, "", {"expansion", "mix", "loss", "metrics"});

    if (doc.contains("expansion")) {
        const auto& e = doc["expansion"];
        reject_unknown(e, "expansion",
                       {"b1", "b2", "n_slic", "slic_compactness", "slic_iterations", "gc_sigma", "gc_lambda",
                        "literal_formulas"});
        auto& x = cfg.expansion;
        read_key(e, "b1", x.b1, "expansion");
        read_key(e, "b2", x.b2, "expansion");
        read_key(e, "n_slic", x.n_slic, "expansion");
        read_key(e, "slic_compactness", x.slic_compactness, "expansion");
        read_key(e, "slic_iterations", x.slic_iterations, "expansion");
        read_key(e, "gc_lambda", x.gc_lambda, "expansion");
        read_key(e, "literal_formulas", x.literal_formulas, "expansion");
        if (e.contains("gc_sigma")) {
            if (e["gc_sigma"].is_null()) {
                x.gc_sigma.reset();
            } else if (e["gc_sigma"].is_number()) {
                x.gc_sigma = e["gc_sigma"].get<double>();
            } else {
                throw FormatError("config: expansion.gc_sigma must be a number or null");
            }
        }
    }
    if (doc.contains("mix")) {
        const auto& m = doc["mix"];
        reject_unknown(m, "mix", {"t", "h_bins", "s_bins", "v_bins", "epsilon"});
        if (m.contains("t")) {
            cfg.mix.t = read_threshold(m["t"]);
        }
        read_key(m, "h_bins", cfg.mix.h_bins, "mix");
        read_key(m, "s_bins", cfg.mix.s_bins, "mix");
        read_key(m, "v_bins", cfg.mix.v_bins, "mix");
        read_key(m, "epsilon", cfg.mix.epsilon, "mix");
    }
    if (doc.contains("loss")) {
        const auto& l = doc["loss"];
        reject_unknown(l, "loss", {"lambda1", "lambda2"});
        read_key(l, "lambda1", cfg.loss.lambda1, "loss");
        read_key(l, "lambda2", cfg.loss.lambda2, "loss");
    }
    if (doc.contains("metrics")) {
        const auto& m = doc["metrics"];
        reject_unknown(m, "metrics", {"tau", "averaging"});
        read_key(m, "tau", cfg.metrics.tau, "metrics");
        if (m.contains("averaging")) {
            std::string a;
            read_key(m, "averaging", a, "metrics");
            if (a == "micro") {
                cfg.metrics.averaging = Averaging::kMicro;
            } else if (a == "macro") {
                cfg.metrics.averaging = Averaging::kMacro;
            } else {
                throw FormatError("config: metrics.averaging must be \"micro\" or \"macro\"");
            }
        }
    }
    cfg.validate();
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

std::string config_to_json(const PipelineConfig& cfg, int indent) {
    json doc;
    const auto& e = cfg.expansion;
    doc["expansion"] = {
        {"b1", e.b1},
        {"b2", e.b2},
        {"n_slic", e.n_slic},
        {"slic_compactness", e.slic_compactness},
        {"slic_iterations", e.slic_iterations},
        {"gc_sigma", e.gc_sigma ? json(*e.gc_sigma) : json(nullptr)},
        {"gc_lambda", e.gc_lambda},
        {"literal_formulas", e.literal_formulas},
    };
    doc["mix"] = {
        {"t", std::isinf(cfg.mix.t) ? json("inf") : json(cfg.mix.t)},
        {"h_bins", cfg.mix.h_bins},
        {"s_bins", cfg.mix.s_bins},
        {"v_bins", cfg.mix.v_bins},
        {"epsilon", cfg.mix.epsilon},
    };
    doc["loss"] = {{"lambda1", cfg.loss.lambda1}, {"lambda2", cfg.loss.lambda2}};
    doc["metrics"] = {
        {"tau", cfg.metrics.tau},
        {"averaging", cfg.metrics.averaging == Averaging::kMicro ? "micro" : "macro"},
    };
    return doc.dump(indent);
}

}  // namespace scribkit
