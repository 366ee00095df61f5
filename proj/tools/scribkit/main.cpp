#include <cstdlib>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "commands.hpp"
#include "scribkit/error.hpp"
#include "scribkit/version.hpp"

namespace scribkit::cli {
namespace {

struct Parsed {
    std::string command;
    std::function<int(Context&)> run;
    fs::path record;  // where run.json goes; empty for none
};

struct Globals {
    std::string config;
    int jobs = 0;
    bool quiet = false;
};

void add_globals(CLI::App& app, Globals& g) {
    app.add_option("--config", g.config, std::string("pipeline config JSON (default: $") + kConfigEnv + ", else built-in)");
    app.add_option("-j,--jobs", g.jobs, "worker threads for independent files (0: all cores)")
        ->check(CLI::NonNegativeNumber);
    app.add_flag("-q,--quiet", g.quiet, "suppress progress lines");
}

// Builds the parser for one invocation; the selected subcommand fills `out`.
void build(CLI::App& app, Globals& g, Parsed& out) {
    app.require_subcommand(1);
    add_globals(app, g);

    auto* ms = app.add_subcommand("make-scribbles", "skeletonize binary road masks into scribble PNGs");
    auto msa = std::make_shared<MakeScribblesArgs>();
    ms->add_option("--masks", msa->masks, "directory of binary mask PNGs")->required();
    ms->add_option("--out", msa->out, "output directory")->required();
    ms->callback([&out, msa] {
        out = {"make-scribbles", [msa](Context& c) { run_make_scribbles(*msa, c); return kExitOk; }, msa->out / "run.json"};
    });

    auto* ex = app.add_subcommand("expand", "expand scribbles into tri-state pseudo-labels (ys, yc, merged)");
    auto exa = std::make_shared<ExpandArgs>();
    ex->add_option("--images", exa->images, "directory of RGB PNGs")->required();
    ex->add_option("--scribbles", exa->scribbles, "directory of scribble PNGs, same file names")->required();
    ex->add_option("--out", exa->out, "output directory (ys/, yc/, labels/, stats/)")->required();
    ex->callback([&out, exa] {
        out = {"expand", [exa](Context& c) { run_expand(*exa, c); return kExitOk; }, exa->out / "run.json"};
    });

    auto* mx = app.add_subcommand("mix", "structure-aware mixing of image/label pairs");
    auto mxa = std::make_shared<MixArgs>();
    mx->add_option("--images", mxa->images, "directory of RGB PNGs")->required();
    mx->add_option("--labels", mxa->labels, "directory of tri-label PNGs")->required();
    mx->add_option("--pairs", mxa->pairs, "pairs.json or random:SEED")->required();
    mx->add_option("--out", mxa->out, "output directory")->required();
    mx->callback([&out, mxa] {
        out = {"mix", [mxa](Context& c) { run_mix(*mxa, c); return kExitOk; }, mxa->out / "run.json"};
    });

    auto* le = app.add_subcommand("loss-eval", "evaluate the loss suite on prediction tensors");
    auto lea = std::make_shared<LossEvalArgs>();
    le->add_option("--pred", lea->pred,
                   "directory of predictions <name>.rtb|.png, optional <name>.disc.rtb / <name>.disc_real.rtb")
        ->required();
    le->add_option("--labels", lea->labels, "directory of tri-label PNGs of the original images")->required();
    le->add_option("--mixed", lea->mixed, "output directory of `mix`; enables pair mode");
    le->add_option("--weights", lea->weights, "l1=<lambda1>,l2=<lambda2> (default: config)");
    le->add_option("--grads", lea->grads, "directory for gradient tensors <name>.grad.rtb");
    le->add_option("--out", lea->out, "report JSON")->required();
    le->callback([&out, lea] {
        out = {"loss-eval", [lea](Context& c) { run_loss_eval(*lea, c); return kExitOk; },
               run_record_path(lea->out, false)};
    });

    auto* me = app.add_subcommand("metrics", "IoU, F1, precision and recall against ground-truth masks");
    auto mea = std::make_shared<MetricsArgs>();
    auto tau = std::make_shared<double>(0.5);
    me->add_option("--pred", mea->pred, "directory of predictions <id>.rtb|.png")->required();
    me->add_option("--gt", mea->gt, "directory of binary mask PNGs")->required();
    auto* tau_opt = me->add_option("--tau", *tau, "binarization threshold (pred >= tau is road)");
    me->add_option("--averaging", mea->averaging, "micro or macro (default: config)")
        ->check(CLI::IsMember({"micro", "macro"}));
    me->add_option("--out", mea->out, "metrics JSON")->required();
    me->callback([&out, mea, tau, tau_opt] {
        if (tau_opt->count() > 0) {
            mea->tau = *tau;
        }
        out = {"metrics", [mea](Context& c) { run_metrics(*mea, c); return kExitOk; },
               run_record_path(mea->out, false)};
    });

    auto* sy = app.add_subcommand("synth", "generate a synthetic road dataset");
    auto sya = std::make_shared<SynthArgs>();
    sy->add_option("--count", sya->count, "number of scenes")->capture_default_str();
    sy->add_option("--seed", sya->seed, "dataset seed")->capture_default_str();
    sy->add_option("--size", sya->size, "image height and width")->capture_default_str();
    sy->add_option("--roads", sya->roads, "roads per scene")->capture_default_str();
    sy->add_option("--width-min", sya->width_min, "minimum road width")->capture_default_str();
    sy->add_option("--width-max", sya->width_max, "maximum road width")->capture_default_str();
    sy->add_option("--curvature", sya->curvature, "control-point jitter, fraction of size")->capture_default_str();
    sy->add_option("--texture", sya->texture, "flat, noise or blotches")->capture_default_str();
    sy->add_option("--distractors", sya->distractors, "road-colored blobs outside the mask")->capture_default_str();
    sy->add_option("--out", sya->out, "output directory")->required();
    sy->callback([&out, sya] {
        out = {"synth", [sya](Context& c) { run_synth(*sya, c); return kExitOk; }, sya->out / "run.json"};
    });

    auto* ov = app.add_subcommand("overlay", "tint labels over images (file or directory)");
    auto ova = std::make_shared<OverlayArgs>();
    ov->add_option("--image", ova->image, "RGB PNG or directory")->required();
    ov->add_option("--label", ova->label, "tri-label PNG or directory")->required();
    ov->add_option("--out", ova->out, "output PNG or directory")->required();
    ov->add_flag("--binary", ova->binary, "read labels as binary masks");
    ov->callback([&out, ova] {
        const bool dir = fs::is_directory(ova->image);
        out = {"overlay", [ova](Context& c) { run_overlay(*ova, c); return kExitOk; },
               run_record_path(ova->out, dir)};
    });

    auto* st = app.add_subcommand("selftest", "run the acceptance oracle suites");
    auto sta = std::make_shared<SelftestArgs>();
    st->add_option("--scale", sta->scale, "multiplier on trial counts")->capture_default_str();
    st->add_option("--filter", sta->filter, "only criteria whose id contains this text");
    st->callback([&out, sta] {
        out = {"selftest", [sta](Context& c) { return run_selftest(*sta, c) == 0 ? kExitOk : kExitFailed; }, {}};
    });
}

PipelineConfig resolve_config(const Globals& g, std::string& source) {
    if (!g.config.empty()) {
        source = g.config;
        return load_config(g.config);
    }
    if (const char* env = std::getenv(kConfigEnv); env && *env) {
        source = std::string(kConfigEnv) + "=" + env;
        return load_config(env);
    }
    source = "defaults";
    return PipelineConfig{};
}

int exit_code_for(const std::exception_ptr& e) {
    try {
        std::rethrow_exception(e);
    } catch (const ParameterError& x) {
        std::cerr << "scribkit: parameter error: " << x.what() << "\n";
        return kExitUsage;
    } catch (const NumericError& x) {
        std::cerr << "scribkit: numeric error: " << x.what() << "\n";
        return kExitNumeric;
    } catch (const FormatError& x) {
        std::cerr << "scribkit: format error: " << x.what() << "\n";
        return kExitData;
    } catch (const ShapeError& x) {
        std::cerr << "scribkit: shape error: " << x.what() << "\n";
        return kExitData;
    } catch (const IoError& x) {
        std::cerr << "scribkit: io error: " << x.what() << "\n";
        return kExitData;
    } catch (const fs::filesystem_error& x) {
        std::cerr << "scribkit: io error: " << x.what() << "\n";
        return kExitData;
    } catch (const std::exception& x) {
        std::cerr << "scribkit: internal error: " << x.what() << "\n";
        return kExitFailed;
    }
}

// Parses and runs one subcommand. A forced config (replay) overrides --config.
int dispatch(const std::vector<std::string>& args, const std::optional<json>& forced_config) {
    CLI::App app{"scribkit: scribble expansion, structure-aware mixing and loss tooling", "scribkit"};
    app.set_version_flag("--version", std::string(kVersion));
    app.footer("Re-run a recorded invocation: scribkit replay <run.json> [--no-verify]");
    Globals g;
    Parsed parsed;
    build(app, g, parsed);
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }
    Context ctx;
    ctx.argv = args;
    ctx.quiet = g.quiet;
    ctx.jobs = g.jobs > 0 ? g.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    try {
        if (forced_config) {
            ctx.config = parse_config(forced_config->dump());
            ctx.config_source = "replay";
        } else {
            ctx.config = resolve_config(g, ctx.config_source);
        }
        const int rc = parsed.run(ctx);
        if (!parsed.record.empty()) {
            write_run_record(parsed.record, ctx, parsed.command);
        }
        return rc;
    } catch (...) {
        return exit_code_for(std::current_exception());
    }
}

// Re-executes a recorded run in its original working directory with its
// recorded config, after checking that every input still hashes the same.
int replay(const fs::path& record_path, bool skip_hash_check) {
    try {
        const fs::path abs = fs::absolute(record_path);
        const json rec = read_json(abs);
        for (const char* key : {"tool", "argv", "cwd", "config", "inputs"}) {
            if (!rec.contains(key)) {
                throw FormatError(abs.string() + ": missing \"" + key + "\"");
            }
        }
        if (rec["tool"] != "scribkit") {
            throw FormatError(abs.string() + ": not a scribkit run record");
        }
        if (rec.value("version", "") != kVersion) {
            std::cerr << "scribkit: warning: record was written by version " << rec.value("version", "?")
                      << ", this is " << kVersion << "\n";
        }
        fs::current_path(rec["cwd"].get<std::string>());
        if (!skip_hash_check) {
            for (const auto& [path, digest] : rec["inputs"].items()) {
                if (!fs::is_regular_file(path)) {
                    throw IoError("replay: recorded input " + path + " is missing");
                }
                if (sha256_file(path) != digest.get<std::string>()) {
                    throw IoError("replay: recorded input " + path + " has changed (sha256 mismatch)");
                }
            }
        }
        return dispatch(rec["argv"].get<std::vector<std::string>>(), rec["config"]);
    } catch (...) {
        return exit_code_for(std::current_exception());
    }
}

}  // namespace
}  // namespace scribkit::cli

int main(int argc, char** argv) {
    using namespace scribkit::cli;
    std::vector<std::string> args(argv + 1, argv + argc);
    if (!args.empty() && args[0] == "replay") {
        CLI::App app{"re-run a recorded invocation from its run.json", "scribkit replay"};
        std::string record;
        bool skip = false;
        app.add_option("record", record, "run.json written by an earlier run")->required()->check(CLI::ExistingFile);
        app.add_flag("--no-verify", skip, "skip the input hash check");
        try {
            std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
            app.parse(rest);
        } catch (const CLI::ParseError& e) {
            return app.exit(e) == 0 ? kExitOk : kExitUsage;
        }
        return replay(record, skip);
    }
    return dispatch(args, std::nullopt);
}
