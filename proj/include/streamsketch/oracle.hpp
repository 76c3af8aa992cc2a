#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_map>
#include <vector>

#include "streamsketch/lsh.hpp"
#include "streamsketch/point.hpp"
#include "streamsketch/swakde.hpp"

namespace streamsketch {

/// Synthetic stream with per-query ground truth.
struct LabeledStream {
    std::vector<IdPoint> points;
    std::vector<Point> queries;
    /// Per query: whether some stream point lies within `radius` of it.
    std::vector<bool> planted;
    double ball_mean = 0.0;  // expected point count in a radius ball
    double side = 0.0;       // hypercube side
    std::size_t dim = 0;
    double radius = 0.0;
};

/// Brute-force nearest neighbor; ties break toward the smallest id.
/// Empty input yields nullopt.
std::optional<Neighbor> exact_nn(const std::vector<IdPoint>& points,
                                 const Point& q);

/// The `count` nearest ids, closest first; ties toward the smallest id.
std::vector<Neighbor> exact_knn(const std::vector<IdPoint>& points,
                                const Point& q, std::size_t count);

enum class CrannLabel : std::uint8_t { success = 0, fail = 1 };

/// Grades a near-neighbor answer. When no stream point lies within r of q
/// any answer counts as success; otherwise the answer must name a stream
/// point within c*r (distance recomputed here, never trusted).
CrannLabel classify_crann(const Point& q,
                          const std::optional<std::uint64_t>& returned_id,
                          const std::vector<IdPoint>& points, double r,
                          double c);

/// Exact-counter mirror of a RaceGrid: identical row hashes and clock
/// semantics, but every cell is a plain windowed counter, so its row values
/// are the exact in-window collision counts.
class CounterRace {
  public:
    explicit CounterRace(const RaceConfig& cfg);

    void update(const Point& x);
    void update_batch(const std::vector<Point>& batch);

    struct RowCounts {
        std::vector<std::uint64_t> per_row;  // X_i
        double mean = 0.0;                   // X bar
    };

    /// Exact per-row counts at the current clock. Expires lazily.
    RowCounts query(const Point& q);

    const RaceConfig& config() const { return cfg_; }
    std::uint64_t clock() const { return clock_; }
    BucketId row_hash(std::size_t row, const Point& x) const;

  private:
    struct Cell {
        std::deque<std::pair<std::int64_t, std::uint64_t>> entries;  // (time, amount)
        std::uint64_t total = 0;
    };

    void expire_cell(Cell& cell) const;

    RaceConfig cfg_;
    std::vector<ComposedHash> rows_;
    std::vector<std::unordered_map<BucketId, Cell>> cells_;
    std::uint64_t clock_ = 0;
};

/// Expected collision-count density sum K = sum over the window of
/// k(x, q)^p, where k is the base-hash collision probability. SRP uses the
/// closed form; the p-stable form is estimated per pair with `mc_trials`
/// fresh hash draws.
double exact_kde(const std::vector<Point>& window, const Point& q,
                 const BaseHashSpec& base, std::uint32_t power,
                 std::size_t mc_trials = 10000, std::uint64_t seed = 1);

/// Volume of the unit ball in `dim` dimensions.
double unit_ball_volume(std::size_t dim);

/// Homogeneous Poisson point process on [0, side]^dim with the given
/// intensity, truncated at n_cap points. Emits exactly `query_count` queries,
/// uniform at margin r from the boundary (clamped to side/4 when 2r >= side)
/// so each query ball lies inside the region; planted[i] flags queries with a
/// stream point within r. ball_mean reports intensity * volume of a radius-r
/// ball.
LabeledStream gen_poisson_stream(std::size_t dim, double intensity, double side,
                                 double r, std::size_t n_cap,
                                 std::size_t query_count, std::uint64_t seed);

/// Gaussian mixture stream: `components` means drawn once from N(0, I),
/// then n points in consecutive blocks of n/components per component, unit
/// covariance. Queries (when requested) pick a uniformly random component
/// each and sample from it.
struct MixtureStream {
    std::vector<Point> points;
    std::vector<Point> queries;
    std::vector<Point> means;
};

MixtureStream gen_gaussian_mixture_stream(std::size_t dim, std::size_t n,
                                          std::size_t components,
                                          std::uint64_t seed,
                                          std::size_t query_count = 0);

/// Lower-tail bound for X ~ Poisson(lambda): exp(d - lambda + d ln(lambda/d))
/// bounds P[X <= d] for d <= lambda, with the d = 0 limit exp(-lambda).
double poisson_tail(double d, double lambda);

/// Mean after independent thinning at rate p.
double poisson_thin_mean(double m, double p);

/// Failure probability bound for the sampled near-neighbor sketch:
/// 1/(3 n^eta) + (e^{mp} + e - 1) / e^{mp + 1} with p = n^{-eta}.
double ann_failure_bound(double n, double eta, double m);

/// Same bound after d adversarial deletions (d <= m n^{-eta}):
/// 1/(3 n^eta) + 1/e + poisson_tail(d, mp) (1 - 1/e).
double turnstile_failure_bound(double n, double eta, double m, double d);

/// Random-projection baseline: all points kept, dimensions compressed to
/// target_dim with an i.i.d. N(0, 1/target_dim) matrix. Candidate ranking
/// happens in projected space; reported distances are recomputed in the
/// original space.
class JlIndex {
  public:
    JlIndex(const std::vector<IdPoint>& points, std::size_t target_dim,
            std::uint64_t seed);

    std::optional<Neighbor> query(const Point& q) const;

    /// Ids of the `count` projected-space nearest points, closest first.
    std::vector<std::uint64_t> query_topk(const Point& q, std::size_t count) const;

    std::size_t size() const { return ids_.size(); }
    std::size_t dim() const { return dim_; }
    std::size_t target_dim() const { return target_dim_; }
    double compression() const;
    std::uint64_t bytes_estimate() const;

  private:
    std::vector<float> project(const Point& q) const;

    std::size_t dim_ = 0;
    std::size_t target_dim_ = 0;
    std::vector<float> matrix_;     // target_dim x dim, row major
    std::vector<std::uint64_t> ids_;
    std::vector<float> projected_;  // size() x target_dim, row major
    std::vector<Point> originals_;
};

}  // namespace streamsketch
