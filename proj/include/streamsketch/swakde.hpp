#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "streamsketch/eh.hpp"
#include "streamsketch/lsh.hpp"
#include "streamsketch/point.hpp"

namespace streamsketch {

/// Parameters of a sliding-window kernel density grid: L hash rows whose
/// cells are windowed counters with relative error eps_prime.
struct RaceConfig {
    std::size_t rows = 1;        // L, independent hash rows
    std::size_t dim = 1;
    BaseHashSpec base;           // base hash family of every row
    std::uint32_t power = 1;     // base hashes concatenated per row
    std::uint64_t window = 100;  // N, counted in elements (batches in batch mode)
    double eps_prime = 0.1;      // per-cell counter relative error
    std::uint64_t seed = 0;
    bool batch_mode = false;     // one clock tick per batch instead of per element
};

/// Throws unless the config is usable (rows/dim/power >= 1, window >= 1,
/// eps_prime in (0,1], per-row range representable in 64 bits).
void validate_race_config(const RaceConfig& cfg);

/// The L row hash functions of a config, seeded independently per row.
/// A grid and an exact-counter mirror built from the same config share
/// these exactly.
std::vector<ComposedHash> build_race_rows(const RaceConfig& cfg);

/// Density estimate: mean over rows of the windowed collision counts.
struct KdeEstimate {
    double value = 0.0;
    std::vector<double> per_row;  // row estimates Y_i
};

struct SpaceReport {
    std::uint64_t cells_allocated = 0;
    std::uint64_t total_eh_buckets = 0;
    // Bucket slots if every one of the L * range cells held a full
    // histogram: L * range * (k/2) * (log2(2N/k + 1) + 1) with k = ceil(1/eps').
    double theoretical_bound = 0.0;
};

/// Overall KDE relative error implied by per-cell error eps_prime:
/// eps = 2*eps_prime + eps_prime^2.
double kde_error_from_cell_error(double eps_prime);

/// Inverse of the above: the per-cell error needed for a target overall
/// error, sqrt(1 + eps) - 1.
double cell_error_for_kde_error(double eps);

/// Sliding-window kernel density sketch: an L x range grid of sparse cells,
/// each an ExpHistogram over the last N clock ticks. Updates hash an element
/// into one cell per row and advance the clock; queries average the windowed
/// cell estimates over rows.
class RaceGrid {
  public:
    explicit RaceGrid(const RaceConfig& cfg);

    /// Hashes x into every row at the current clock, then ticks the clock.
    /// Rejected when the grid was built in batch mode.
    void update(const Point& x);

    /// Hashes the whole batch, adds per-cell collision counts in one shot,
    /// and ticks the clock once. Rejected outside batch mode.
    void update_batch(const std::vector<Point>& batch);

    /// Mean over rows of the windowed cell estimates at the current clock.
    /// Lazily expires the touched cells, hence non-const.
    KdeEstimate query(const Point& q);

    /// Same values without mutating anything; used on snapshots.
    KdeEstimate query(const Point& q) const;

    /// Pre-expired copy whose const queries are safe to run concurrently.
    RaceGrid snapshot() const;

    SpaceReport space_report() const;

    const RaceConfig& config() const { return cfg_; }
    std::uint64_t clock() const { return clock_; }
    std::uint64_t row_range() const { return row_range_; }
    std::uint64_t cell_count(std::size_t row) const;
    BucketId row_hash(std::size_t row, const Point& x) const;

    /// Binary snapshot blob; identical bytes for identical state.
    void save(std::ostream& out) const;
    static RaceGrid load(std::istream& in);

  private:
    RaceGrid() = default;

    RaceConfig cfg_;
    std::vector<ComposedHash> rows_;
    std::vector<std::unordered_map<BucketId, ExpHistogram>> cells_;
    std::uint64_t row_range_ = 0;
    std::uint64_t clock_ = 0;
};

/// Result of the doubling search for the row count.
struct RowSearchResult {
    std::size_t rows = 0;
    std::size_t iterations = 0;
    // Queries with zero mean collision count, excluded from the stopping rule.
    std::size_t zero_density_queries = 0;
};

/// Doubles the row count r starting from 1. Each round streams the data into
/// an exact-counter grid of r rows (concatenation 1) and stops once
/// r > max over queries of (2 max_i X_i^2 / ((1+eps')^2 K^2)) ln(2/delta)
/// where K is the mean row count for that query. window = 0 means the whole
/// stream stays in scope.
RowSearchResult find_optimal_rows(const std::vector<Point>& stream,
                                  const std::vector<Point>& queries,
                                  double eps_prime, double delta,
                                  const BaseHashSpec& base, std::uint64_t seed,
                                  std::uint64_t window = 0);

}  // namespace streamsketch
