#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace streamsketch::bench {

enum class ExperimentKind : int {
    ann_compare = 0,
    ann_scaling,
    ann_qps,
    kde_sketch_size,
    kde_window,
    kde_vs_counter,
    gen_synthetic,
};

const char* experiment_name(ExperimentKind kind);
ExperimentKind experiment_from_name(const std::string& name);

/// Where the points and queries come from.
struct DatasetSpec {
    // fvecs | csv | synthetic-uniform | gaussian-mixture | poisson
    std::string kind = "synthetic-uniform";
    std::string path;        // points file for fvecs/csv
    std::string query_path;  // queries file for fvecs/csv
    std::size_t n = 10000;
    std::size_t dim = 32;
    double side = 1.0;          // synthetic-uniform and poisson
    std::size_t components = 10;  // gaussian-mixture
    double intensity = 0.0;     // poisson; 0 picks n/side^dim
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::ann_compare;
    DatasetSpec dataset;

    // Near-neighbor grids. c = 1 + epsilon.
    std::vector<double> eta_grid = {0.5};
    std::vector<double> epsilon_grid = {0.5};
    std::vector<std::size_t> stream_sizes = {1000, 10000, 40000};

    // Density grids.
    std::vector<std::size_t> rows_grid = {100, 200, 400, 800};
    std::vector<std::uint64_t> window_grid = {64, 128, 256, 512, 1024, 2048};

    double r = 0.5;             // query radius
    double eps_prime = 0.1;     // per-cell counter error
    std::uint32_t power = 1;    // base hashes per grid row
    std::string family;         // srp | p-stable; empty picks per experiment
    double width = 0.0;         // p-stable quantization width; 0 uses r
    std::uint64_t range_per_hash = 100;
    std::uint32_t k_override = 0;       // concatenation length; 0 derives
    std::size_t tables_override = 0;    // table count; 0 derives
    std::size_t collision_trials = 100000;  // Monte Carlo p1/p2 sample size

    std::size_t jl_dim = 0;     // 0 matches the sketch's compression
    std::size_t store_count = 10000;
    std::size_t query_count = 500;
    std::uint64_t window = 450;   // fixed window for kde-sketch-size
    std::size_t kde_rows = 100;   // fixed rows for kde-window

    std::vector<std::uint64_t> seeds = {1};
    bool full_scale = false;
    std::string out_dir = "results";
};

/// Per-experiment defaults (before any config file overrides).
ExperimentConfig default_config(ExperimentKind kind);

/// Reads a JSON config file over the defaults for its experiment kind.
/// Unknown keys raise ConfigError.
ExperimentConfig load_config(const std::string& path);

/// Applies a JSON text (already loaded) over `base`; used by load_config.
ExperimentConfig parse_config(const std::string& json_text);

/// Full-scale knobs: the large benchmark workload instead of the desk one.
void apply_full_scale(ExperimentConfig& cfg);

/// JSON echo of the effective config, written next to the results.
std::string config_to_json(const ExperimentConfig& cfg);

/// Raises ConfigError on empty grids, missing referenced files, or
/// out-of-range values.
void validate_config(const ExperimentConfig& cfg);

}  // namespace streamsketch::bench
