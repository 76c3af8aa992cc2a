#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "streamsketch/bench/config.hpp"
#include "streamsketch/bench/experiments.hpp"
#include "streamsketch/errors.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool full_scale = false;
};

int run(streamsketch::bench::ExperimentKind kind, const CliOptions& opts,
        bool seed_given, bool out_given) {
    using namespace streamsketch::bench;
    ExperimentConfig cfg = opts.config_path.empty()
                               ? default_config(kind)
                               : load_config(opts.config_path);
    if (cfg.kind != kind)
        throw streamsketch::ConfigError(
            std::string("config file names experiment '") +
            experiment_name(cfg.kind) + "' but the subcommand is '" +
            experiment_name(kind) + "'");
    if (seed_given) cfg.seeds = {opts.seed};
    if (out_given) cfg.out_dir = opts.out_dir;
    if (opts.full_scale) {
        cfg.full_scale = true;
        apply_full_scale(cfg);
    }
    run_experiment(cfg);
    std::printf("wrote %s/results.csv\n", cfg.out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    using streamsketch::bench::ExperimentKind;
    CLI::App app{"Streaming near-neighbor and density sketch benchmarks"};
    app.require_subcommand(1);

    static constexpr std::pair<const char*, ExperimentKind> kSubcommands[] = {
        {"ann-compare", ExperimentKind::ann_compare},
        {"ann-scaling", ExperimentKind::ann_scaling},
        {"ann-qps", ExperimentKind::ann_qps},
        {"kde-sketch-size", ExperimentKind::kde_sketch_size},
        {"kde-window", ExperimentKind::kde_window},
        {"kde-vs-counter", ExperimentKind::kde_vs_counter},
        {"gen-synthetic", ExperimentKind::gen_synthetic},
    };
    static constexpr const char* kDescriptions[] = {
        "near-neighbor sketch vs random-projection baseline",
        "sketch memory across stream sizes and sampling rates",
        "query throughput, sketch vs baseline",
        "density error across row counts at a fixed window",
        "density error across window sizes at a fixed row count",
        "density sketch against its exact-counter twin",
        "write a synthetic dataset as fvecs files",
    };

    CliOptions opts;
    CLI::Option* seed_opts[std::size(kSubcommands)];
    CLI::Option* out_opts[std::size(kSubcommands)];
    CLI::App* subs[std::size(kSubcommands)];
    for (std::size_t i = 0; i < std::size(kSubcommands); ++i) {
        CLI::App* sub = app.add_subcommand(kSubcommands[i].first,
                                           kDescriptions[i]);
        sub->add_option("--config", opts.config_path,
                        "JSON config file overriding the defaults");
        out_opts[i] = sub->add_option("--out", opts.out_dir,
                                      "output directory for results");
        seed_opts[i] = sub->add_option("--seed", opts.seed,
                                       "single seed replacing the seed list");
        sub->add_flag("--full-scale", opts.full_scale,
                      "large benchmark workload instead of the desk one");
        subs[i] = sub;
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (std::size_t i = 0; i < std::size(kSubcommands); ++i) {
            if (subs[i]->parsed())
                return run(kSubcommands[i].second, opts,
                           seed_opts[i]->count() > 0, out_opts[i]->count() > 0);
        }
        std::fprintf(stderr, "error: no subcommand selected\n");
        return 2;
    } catch (const streamsketch::FormatError& e) {
        std::fprintf(stderr, "data format error: %s\n", e.what());
        return 3;
    } catch (const streamsketch::Error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
