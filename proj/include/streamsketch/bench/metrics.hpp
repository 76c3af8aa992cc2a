#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "streamsketch/oracle.hpp"
#include "streamsketch/point.hpp"

namespace streamsketch::bench {

/// One metric from one grid cell of one seeded run.
struct ResultRow {
    std::string experiment;
    std::string dataset;
    std::string params;
    std::string metric;
    double value = 0.0;
    double runtime_s = 0.0;
    std::uint64_t seed = 0;
};

/// Collects rows and writes them as CSV with a fixed header.
class ResultWriter {
  public:
    void add(std::string experiment, std::string dataset, std::string params,
             std::string metric, double value, double runtime_s,
             std::uint64_t seed);

    const std::vector<ResultRow>& rows() const { return rows_; }

    void write_csv(const std::string& path) const;

  private:
    std::vector<ResultRow> rows_;
};

/// Monotonic wall clock.
class StopWatch {
  public:
    StopWatch() : start_(std::chrono::steady_clock::now()) {}
    void reset() { start_ = std::chrono::steady_clock::now(); }
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

/// |candidates intersect nearest| / |nearest|.
double recall_fraction(const std::vector<std::uint64_t>& candidates,
                       const std::vector<Neighbor>& nearest);

/// Fraction of queries graded success for answers `returned[i]`.
double crann_accuracy(const std::vector<Point>& queries,
                      const std::vector<std::optional<std::uint64_t>>& returned,
                      const std::vector<IdPoint>& points, double r, double c);

}  // namespace streamsketch::bench
