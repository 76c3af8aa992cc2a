#include "streamsketch/swakde.hpp"

#include <algorithm>
#include <cmath>

#include "binio.hpp"
#include "streamsketch/errors.hpp"
#include "streamsketch/oracle.hpp"
#include "streamsketch/rng.hpp"

namespace streamsketch {

void validate_race_config(const RaceConfig& cfg) {
    if (cfg.rows < 1) throw ParameterError("grid: rows must be >= 1");
    if (cfg.dim < 1) throw ParameterError("grid: dim must be >= 1");
    if (cfg.power < 1) throw ParameterError("grid: power must be >= 1");
    if (cfg.window < 1) throw ParameterError("grid: window must be >= 1");
    if (!(cfg.eps_prime > 0.0) || !(cfg.eps_prime <= 1.0))
        throw ParameterError("grid: eps_prime must be in (0, 1]");
    if (cfg.base.kind == FamilyKind::srp) {
        if (cfg.power > 62) throw ParameterError("grid: srp power must be <= 62");
    } else {
        if (!(cfg.base.width > 0.0)) throw ParameterError("grid: width must be > 0");
        if (cfg.base.range_per_hash < 2)
            throw ParameterError("grid: range per hash must be >= 2");
        checked_pow_u64(cfg.base.range_per_hash, cfg.power);
    }
}

std::vector<ComposedHash> build_race_rows(const RaceConfig& cfg) {
    validate_race_config(cfg);
    std::vector<ComposedHash> rows;
    rows.reserve(cfg.rows);
    for (std::size_t i = 0; i < cfg.rows; ++i)
        rows.emplace_back(cfg.base, cfg.dim, cfg.power, derive_seed(cfg.seed, i));
    return rows;
}

double kde_error_from_cell_error(double eps_prime) {
    if (!(eps_prime > 0.0) || !(eps_prime <= 1.0))
        throw ParameterError("cell error must be in (0, 1]");
    return 2.0 * eps_prime + eps_prime * eps_prime;
}

double cell_error_for_kde_error(double eps) {
    if (!(eps > 0.0)) throw ParameterError("kde error must be > 0");
    return std::sqrt(1.0 + eps) - 1.0;
}

RaceGrid::RaceGrid(const RaceConfig& cfg)
    : cfg_(cfg), rows_(build_race_rows(cfg)) {
    cells_.resize(cfg_.rows);
    row_range_ = rows_[0].range();
}

void RaceGrid::update(const Point& x) {
    if (cfg_.batch_mode)
        throw ConfigError("grid is in batch mode; use update_batch");
    if (x.dim() != cfg_.dim) throw ShapeError("grid: dimension mismatch");
    auto t = static_cast<std::int64_t>(clock_);
    for (std::size_t i = 0; i < cfg_.rows; ++i) {
        auto [it, created] = cells_[i].try_emplace(rows_[i](x), cfg_.eps_prime,
                                                   cfg_.window);
        it->second.add(t, 1);
    }
    ++clock_;
}

void RaceGrid::update_batch(const std::vector<Point>& batch) {
    if (!cfg_.batch_mode)
        throw ConfigError("grid is in element mode; use update");
    if (batch.empty()) throw ParameterError("grid: empty batch");
    for (const Point& x : batch)
        if (x.dim() != cfg_.dim) throw ShapeError("grid: dimension mismatch");
    auto t = static_cast<std::int64_t>(clock_);
    for (std::size_t i = 0; i < cfg_.rows; ++i) {
        std::unordered_map<BucketId, std::uint64_t> tally;
        for (const Point& x : batch) ++tally[rows_[i](x)];
        for (const auto& [bucket, amount] : tally) {
            auto [it, created] =
                cells_[i].try_emplace(bucket, cfg_.eps_prime, cfg_.window);
            it->second.add(t, amount);
        }
    }
    ++clock_;
}

KdeEstimate RaceGrid::query(const Point& q) {
    if (q.dim() != cfg_.dim) throw ShapeError("grid: dimension mismatch");
    auto now = static_cast<std::int64_t>(clock_);
    KdeEstimate out;
    out.per_row.resize(cfg_.rows, 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < cfg_.rows; ++i) {
        auto it = cells_[i].find(rows_[i](q));
        if (it != cells_[i].end()) {
            out.per_row[i] = it->second.estimate(now);
            sum += out.per_row[i];
        }
    }
    out.value = sum / static_cast<double>(cfg_.rows);
    return out;
}

KdeEstimate RaceGrid::query(const Point& q) const {
    if (q.dim() != cfg_.dim) throw ShapeError("grid: dimension mismatch");
    auto now = static_cast<std::int64_t>(clock_);
    KdeEstimate out;
    out.per_row.resize(cfg_.rows, 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < cfg_.rows; ++i) {
        auto it = cells_[i].find(rows_[i](q));
        if (it != cells_[i].end()) {
            out.per_row[i] = it->second.peek(now);
            sum += out.per_row[i];
        }
    }
    out.value = sum / static_cast<double>(cfg_.rows);
    return out;
}

RaceGrid RaceGrid::snapshot() const {
    RaceGrid copy(*this);
    auto now = static_cast<std::int64_t>(copy.clock_);
    for (auto& row : copy.cells_) {
        for (auto it = row.begin(); it != row.end();) {
            it->second.expire(now);
            if (it->second.bucket_count() == 0)
                it = row.erase(it);
            else
                ++it;
        }
    }
    return copy;
}

SpaceReport RaceGrid::space_report() const {
    SpaceReport report;
    for (const auto& row : cells_) {
        report.cells_allocated += row.size();
        for (const auto& [bucket, eh] : row)
            report.total_eh_buckets += eh.bucket_count();
    }
    double k = std::ceil(1.0 / cfg_.eps_prime);
    double per_cell =
        (k / 2.0) *
        (std::log2(2.0 * static_cast<double>(cfg_.window) / k + 1.0) + 1.0);
    report.theoretical_bound = static_cast<double>(cfg_.rows) *
                               static_cast<double>(row_range_) * per_cell;
    return report;
}

std::uint64_t RaceGrid::cell_count(std::size_t row) const {
    if (row >= cells_.size()) throw ParameterError("grid: row out of range");
    return cells_[row].size();
}

BucketId RaceGrid::row_hash(std::size_t row, const Point& x) const {
    if (row >= rows_.size()) throw ParameterError("grid: row out of range");
    return rows_[row](x);
}

void RaceGrid::save(std::ostream& out) const {
    binio::write_magic(out, "SWKD");
    binio::write_u32(out, 1);
    binio::write_u64(out, cfg_.rows);
    binio::write_u64(out, cfg_.dim);
    binio::write_u8(out, static_cast<std::uint8_t>(cfg_.base.kind));
    binio::write_f64(out, cfg_.base.width);
    binio::write_u64(out, cfg_.base.range_per_hash);
    binio::write_u32(out, cfg_.power);
    binio::write_u64(out, cfg_.window);
    binio::write_f64(out, cfg_.eps_prime);
    binio::write_u64(out, cfg_.seed);
    binio::write_u8(out, cfg_.batch_mode ? 1 : 0);
    binio::write_u64(out, clock_);
    for (const auto& row : cells_) {
        binio::write_u64(out, row.size());
        std::vector<BucketId> ids;
        ids.reserve(row.size());
        for (const auto& [bucket, eh] : row) ids.push_back(bucket);
        std::sort(ids.begin(), ids.end());
        for (BucketId bucket : ids) {
            const ExpHistogram& eh = row.at(bucket);
            binio::write_u64(out, bucket);
            auto buckets = eh.buckets();
            binio::write_u64(out, buckets.size());
            for (const auto& b : buckets) {
                binio::write_u64(out, b.size);
                binio::write_i64(out, b.newest);
                binio::write_i64(out, b.oldest);
            }
        }
    }
    if (!out) throw FormatError("failed to write grid snapshot");
}

RaceGrid RaceGrid::load(std::istream& in) {
    binio::expect_magic(in, "SWKD");
    std::uint32_t version = binio::read_u32(in);
    if (version != 1) throw FormatError("unsupported grid snapshot version");
    RaceConfig cfg;
    cfg.rows = binio::read_u64(in);
    cfg.dim = binio::read_u64(in);
    cfg.base.kind = static_cast<FamilyKind>(binio::read_u8(in));
    cfg.base.width = binio::read_f64(in);
    cfg.base.range_per_hash = binio::read_u64(in);
    cfg.power = binio::read_u32(in);
    cfg.window = binio::read_u64(in);
    cfg.eps_prime = binio::read_f64(in);
    cfg.seed = binio::read_u64(in);
    cfg.batch_mode = binio::read_u8(in) != 0;
    RaceGrid grid(cfg);
    grid.clock_ = binio::read_u64(in);
    for (std::size_t i = 0; i < cfg.rows; ++i) {
        std::uint64_t cell_count = binio::read_u64(in);
        for (std::uint64_t c = 0; c < cell_count; ++c) {
            BucketId bucket = binio::read_u64(in);
            std::uint64_t bucket_count = binio::read_u64(in);
            std::vector<ExpHistogram::Bucket> buckets(bucket_count);
            for (auto& b : buckets) {
                b.size = binio::read_u64(in);
                b.newest = binio::read_i64(in);
                b.oldest = binio::read_i64(in);
            }
            grid.cells_[i].emplace(
                bucket,
                ExpHistogram::from_buckets(cfg.eps_prime, cfg.window, buckets));
        }
    }
    return grid;
}

RowSearchResult find_optimal_rows(const std::vector<Point>& stream,
                                  const std::vector<Point>& queries,
                                  double eps_prime, double delta,
                                  const BaseHashSpec& base, std::uint64_t seed,
                                  std::uint64_t window) {
    if (stream.empty() || queries.empty())
        throw ParameterError("row search: stream and queries must be non-empty");
    if (!(eps_prime > 0.0) || !(eps_prime <= 1.0))
        throw ParameterError("row search: eps_prime must be in (0, 1]");
    if (!(delta > 0.0) || !(delta < 1.0))
        throw ParameterError("row search: delta must be in (0, 1)");
    std::size_t dim = stream[0].dim();
    for (const Point& x : stream)
        if (x.dim() != dim) throw ShapeError("row search: mixed stream dims");
    for (const Point& q : queries)
        if (q.dim() != dim) throw ShapeError("row search: mixed query dims");

    // window 0 keeps the whole stream in scope (the final clock sits one past
    // the last element, hence the +1).
    std::uint64_t effective_window =
        window == 0 ? static_cast<std::uint64_t>(stream.size()) + 1 : window;
    double log_term = std::log(2.0 / delta);
    double denom = (1.0 + eps_prime) * (1.0 + eps_prime);

    RowSearchResult result;
    std::size_t r = 1;
    while (true) {
        RaceConfig cfg;
        cfg.rows = r;
        cfg.dim = dim;
        cfg.base = base;
        cfg.power = 1;
        cfg.window = effective_window;
        cfg.eps_prime = eps_prime;
        cfg.seed = derive_seed(seed, result.iterations);
        CounterRace twin(cfg);
        for (const Point& x : stream) twin.update(x);

        double max_threshold = 0.0;
        std::size_t zero_queries = 0;
        for (const Point& q : queries) {
            auto counts = twin.query(q);
            if (counts.mean == 0.0) {
                ++zero_queries;
                continue;
            }
            double max_count = 0.0;
            for (std::uint64_t x : counts.per_row)
                max_count = std::max(max_count, static_cast<double>(x));
            double threshold = 2.0 * max_count * max_count /
                               (denom * counts.mean * counts.mean) * log_term;
            max_threshold = std::max(max_threshold, threshold);
        }
        ++result.iterations;
        result.zero_density_queries = zero_queries;
        if (static_cast<double>(r) > max_threshold) {
            result.rows = r;
            return result;
        }
        if (r > (std::size_t{1} << 30))
            throw Error("row search did not converge");
        r *= 2;
    }
}

}  // namespace streamsketch
