#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "scribkit/config.hpp"

namespace scribkit::cli {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // selftest criteria failed, or an internal error
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumeric = 4;

inline constexpr const char* kConfigEnv = "SCRIBKIT_CONFIG";

// Everything a run needs besides its own flags, and everything run.json records.
struct Context {
    PipelineConfig config;
    std::string config_source = "defaults";
    std::vector<std::string> argv;  // subcommand and its arguments
    int jobs = 1;
    bool quiet = false;
    json seeds = json::object();
    std::vector<fs::path> inputs;  // hashed into run.json
    std::vector<fs::path> outputs;
};

// Sorted regular files in dir with one of the extensions (lower case, with dot).
std::vector<fs::path> list_files(const fs::path& dir, const std::vector<std::string>& extensions);
void require_dir(const fs::path& dir, const std::string& what);
void ensure_dir(const fs::path& dir);

std::string sha256_file(const fs::path& path);

void write_json(const fs::path& path, const json& doc);
json read_json(const fs::path& path);

// Runs fn(i) for i in [0, n) on up to jobs threads. The exception of the lowest
// failing index is rethrown, so errors do not depend on scheduling.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

json config_json(const PipelineConfig& cfg);

// run.json next to the outputs: inside out_dir, or <stem>.run.json beside a file.
fs::path run_record_path(const fs::path& out, bool out_is_dir);
void write_run_record(const fs::path& path, const Context& ctx, const std::string& command);

void info(const Context& ctx, const std::string& msg);

}  // namespace scribkit::cli
