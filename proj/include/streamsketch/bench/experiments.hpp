#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "streamsketch/bench/config.hpp"
#include "streamsketch/bench/metrics.hpp"
#include "streamsketch/point.hpp"

namespace streamsketch::bench {

/// Materialized points and queries for one run.
struct Dataset {
    std::string name;
    std::vector<IdPoint> points;
    std::vector<Point> queries;
};

/// Materializes the configured dataset. Synthetic kinds are generated from
/// the seed; file kinds are read and truncated to the requested counts.
/// File kinds require both a points path and a query path.
Dataset load_dataset(const ExperimentConfig& cfg, std::size_t n_points,
                     std::size_t n_queries, std::uint64_t seed);

/// Runs the configured experiment and appends its rows to `writer`. Reads
/// dataset files when configured; writes files only for gen-synthetic.
void run_rows(const ExperimentConfig& cfg, ResultWriter& writer);

/// Validates, runs, and writes results.csv plus config.json under
/// cfg.out_dir.
void run_experiment(const ExperimentConfig& cfg);

}  // namespace streamsketch::bench
