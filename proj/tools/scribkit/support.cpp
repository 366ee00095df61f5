#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <thread>

#include <openssl/evp.h>

#include "scribkit/error.hpp"
#include "scribkit/png_io.hpp"
#include "scribkit/version.hpp"

namespace scribkit::cli {

std::vector<fs::path> list_files(const fs::path& dir, const std::vector<std::string>& extensions) {
    require_dir(dir, "input");
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) {
            continue;
        }
        std::string ext = e.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (std::find(extensions.begin(), extensions.end(), ext) != extensions.end()) {
            out.push_back(e.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void require_dir(const fs::path& dir, const std::string& what) {
    if (!fs::is_directory(dir)) {
        throw IoError(what + " directory " + dir.string() + " does not exist");
    }
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create directory " + dir.string() + (ec ? ": " + ec.message() : ""));
    }
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string() + " for hashing");
    }
    EVP_MD_CTX* md = EVP_MD_CTX_new();
    EVP_DigestInit_ex(md, EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        EVP_DigestUpdate(md, buf, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(md, digest, &len);
    EVP_MD_CTX_free(md);
    std::string hex;
    char two[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(two, sizeof two, "%02x", digest[i]);
        hex += two;
    }
    return hex;
}

void write_json(const fs::path& path, const json& doc) {
    const std::string text = doc.dump(2) + "\n";
    write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    std::vector<std::exception_ptr> errors(n);
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, jobs)), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

json config_json(const PipelineConfig& cfg) { return json::parse(config_to_json(cfg)); }

fs::path run_record_path(const fs::path& out, bool out_is_dir) {
    if (out_is_dir) {
        return out / "run.json";
    }
    return out.parent_path() / (out.stem().string() + ".run.json");
}

void write_run_record(const fs::path& path, const Context& ctx, const std::string& command) {
    json inputs = json::object();
    for (const auto& p : ctx.inputs) {
        inputs[p.string()] = sha256_file(p);
    }
    json outputs = json::array();
    for (const auto& p : ctx.outputs) {
        outputs.push_back(p.string());
    }
    const json doc{
        {"tool", "scribkit"},
        {"version", kVersion},
        {"command", command},
        {"argv", ctx.argv},
        {"cwd", fs::current_path().string()},
        {"config_source", ctx.config_source},
        {"config", config_json(ctx.config)},
        {"seeds", ctx.seeds},
        {"inputs", inputs},
        {"outputs", outputs},
    };
    write_json(path, doc);
}

void info(const Context& ctx, const std::string& msg) {
    if (!ctx.quiet) {
        std::cout << msg << "\n";
    }
}

}  // namespace scribkit::cli
