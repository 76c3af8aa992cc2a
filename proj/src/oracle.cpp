#include "streamsketch/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "streamsketch/errors.hpp"
#include "streamsketch/rng.hpp"

namespace streamsketch {

std::optional<Neighbor> exact_nn(const std::vector<IdPoint>& points,
                                 const Point& q) {
    std::optional<Neighbor> best;
    double best_sq = 0.0;
    for (const IdPoint& item : points) {
        double sq = squared_distance(item.point, q);
        if (!best || sq < best_sq || (sq == best_sq && item.id < best->id)) {
            best = Neighbor{item.id, 0.0};
            best_sq = sq;
        }
    }
    if (best) best->distance = std::sqrt(best_sq);
    return best;
}

std::vector<Neighbor> exact_knn(const std::vector<IdPoint>& points,
                                const Point& q, std::size_t count) {
    std::vector<std::pair<double, std::uint64_t>> order;
    order.reserve(points.size());
    for (const IdPoint& item : points)
        order.emplace_back(squared_distance(item.point, q), item.id);
    std::size_t keep = std::min(count, order.size());
    std::partial_sort(order.begin(), order.begin() + keep, order.end());
    std::vector<Neighbor> result;
    result.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i)
        result.push_back(Neighbor{order[i].second, std::sqrt(order[i].first)});
    return result;
}

CrannLabel classify_crann(const Point& q,
                          const std::optional<std::uint64_t>& returned_id,
                          const std::vector<IdPoint>& points, double r,
                          double c) {
    if (!(r > 0.0) || !(c >= 1.0))
        throw ParameterError("classify: needs r > 0 and c >= 1");
    double min_sq = -1.0;
    for (const IdPoint& item : points) {
        double sq = squared_distance(item.point, q);
        if (min_sq < 0.0 || sq < min_sq) min_sq = sq;
    }
    bool near_exists = min_sq >= 0.0 && std::sqrt(min_sq) <= r;
    if (!near_exists) return CrannLabel::success;
    if (!returned_id) return CrannLabel::fail;
    for (const IdPoint& item : points) {
        if (item.id != *returned_id) continue;
        return euclidean_distance(item.point, q) <= c * r ? CrannLabel::success
                                                          : CrannLabel::fail;
    }
    return CrannLabel::fail;
}

CounterRace::CounterRace(const RaceConfig& cfg)
    : cfg_(cfg), rows_(build_race_rows(cfg)) {
    cells_.resize(cfg_.rows);
}

void CounterRace::expire_cell(Cell& cell) const {
    auto cutoff = static_cast<std::int64_t>(clock_) -
                  static_cast<std::int64_t>(cfg_.window);
    while (!cell.entries.empty() && cell.entries.front().first <= cutoff) {
        cell.total -= cell.entries.front().second;
        cell.entries.pop_front();
    }
}

void CounterRace::update(const Point& x) {
    if (cfg_.batch_mode)
        throw ConfigError("counter grid is in batch mode; use update_batch");
    if (x.dim() != cfg_.dim) throw ShapeError("counter grid: dimension mismatch");
    auto t = static_cast<std::int64_t>(clock_);
    for (std::size_t i = 0; i < cfg_.rows; ++i) {
        Cell& cell = cells_[i][rows_[i](x)];
        expire_cell(cell);
        cell.entries.emplace_back(t, 1);
        cell.total += 1;
    }
    ++clock_;
}

void CounterRace::update_batch(const std::vector<Point>& batch) {
    if (!cfg_.batch_mode)
        throw ConfigError("counter grid is in element mode; use update");
    if (batch.empty()) throw ParameterError("counter grid: empty batch");
    for (const Point& x : batch)
        if (x.dim() != cfg_.dim)
            throw ShapeError("counter grid: dimension mismatch");
    auto t = static_cast<std::int64_t>(clock_);
    for (std::size_t i = 0; i < cfg_.rows; ++i) {
        std::unordered_map<BucketId, std::uint64_t> tally;
        for (const Point& x : batch) ++tally[rows_[i](x)];
        for (const auto& [bucket, amount] : tally) {
            Cell& cell = cells_[i][bucket];
            expire_cell(cell);
            cell.entries.emplace_back(t, amount);
            cell.total += amount;
        }
    }
    ++clock_;
}

CounterRace::RowCounts CounterRace::query(const Point& q) {
    if (q.dim() != cfg_.dim) throw ShapeError("counter grid: dimension mismatch");
    RowCounts out;
    out.per_row.resize(cfg_.rows, 0);
    double sum = 0.0;
    for (std::size_t i = 0; i < cfg_.rows; ++i) {
        auto it = cells_[i].find(rows_[i](q));
        if (it != cells_[i].end()) {
            expire_cell(it->second);
            out.per_row[i] = it->second.total;
            sum += static_cast<double>(it->second.total);
        }
    }
    out.mean = sum / static_cast<double>(cfg_.rows);
    return out;
}

BucketId CounterRace::row_hash(std::size_t row, const Point& x) const {
    if (row >= rows_.size()) throw ParameterError("counter grid: row out of range");
    return rows_[row](x);
}

double exact_kde(const std::vector<Point>& window, const Point& q,
                 const BaseHashSpec& base, std::uint32_t power,
                 std::size_t mc_trials, std::uint64_t seed) {
    if (power < 1) throw ParameterError("kde: power must be >= 1");
    double total = 0.0;
    if (base.kind == FamilyKind::srp) {
        for (const Point& x : window) total += srp_collision_prob(x, q, power);
        return total;
    }
    if (mc_trials == 0) throw ParameterError("kde: mc_trials must be >= 1");
    for (std::size_t i = 0; i < window.size(); ++i) {
        double k_hat = estimate_collision_prob(base, window[i], q, mc_trials,
                                               derive_seed(seed, i));
        total += std::pow(k_hat, static_cast<double>(power));
    }
    return total;
}

double unit_ball_volume(std::size_t dim) {
    if (dim == 0) throw ParameterError("ball volume: dim must be >= 1");
    double half = static_cast<double>(dim) / 2.0;
    return std::exp(half * std::log(3.14159265358979323846) -
                    std::lgamma(half + 1.0));
}

LabeledStream gen_poisson_stream(std::size_t dim, double intensity, double side,
                                 double r, std::size_t n_cap,
                                 std::size_t query_count, std::uint64_t seed) {
    if (dim == 0) throw ParameterError("poisson stream: dim must be >= 1");
    if (!(intensity > 0.0) || !(side > 0.0) || !(r > 0.0))
        throw ParameterError("poisson stream: intensity, side, r must be > 0");
    LabeledStream out;
    out.dim = dim;
    out.side = side;
    out.radius = r;
    out.ball_mean =
        intensity * unit_ball_volume(dim) * std::pow(r, static_cast<double>(dim));

    Rng rng(derive_seed(seed, 0));
    double region_mean = intensity * std::pow(side, static_cast<double>(dim));
    std::uint64_t count = std::min<std::uint64_t>(rng.poisson(region_mean), n_cap);
    out.points.reserve(count);
    for (std::uint64_t id = 0; id < count; ++id) {
        Point p;
        p.coords.resize(dim);
        for (std::size_t i = 0; i < dim; ++i)
            p.coords[i] = static_cast<float>(rng.uniform(0.0, side));
        out.points.push_back(IdPoint{id, std::move(p)});
    }

    double margin = (2.0 * r < side) ? r : side / 4.0;
    Rng qrng(derive_seed(seed, 1));
    double r_sq = r * r;
    out.queries.reserve(query_count);
    for (std::size_t j = 0; j < query_count; ++j) {
        Point q;
        q.coords.resize(dim);
        for (std::size_t i = 0; i < dim; ++i)
            q.coords[i] = static_cast<float>(qrng.uniform(margin, side - margin));
        bool hit = false;
        for (const IdPoint& item : out.points) {
            if (squared_distance(item.point, q) <= r_sq) {
                hit = true;
                break;
            }
        }
        out.planted.push_back(hit);
        out.queries.push_back(std::move(q));
    }
    return out;
}

MixtureStream gen_gaussian_mixture_stream(std::size_t dim, std::size_t n,
                                          std::size_t components,
                                          std::uint64_t seed,
                                          std::size_t query_count) {
    if (dim == 0 || n == 0 || components == 0)
        throw ParameterError("mixture stream: dim, n, components must be >= 1");
    if (components > n)
        throw ParameterError("mixture stream: more components than points");
    MixtureStream out;

    Rng mean_rng(derive_seed(seed, 0));
    out.means.resize(components);
    for (Point& mean : out.means) {
        mean.coords.resize(dim);
        for (std::size_t i = 0; i < dim; ++i)
            mean.coords[i] = static_cast<float>(mean_rng.normal());
    }

    std::size_t block = n / components;
    Rng point_rng(derive_seed(seed, 1));
    out.points.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t c = std::min(block == 0 ? components - 1 : j / block,
                                 components - 1);
        Point p;
        p.coords.resize(dim);
        for (std::size_t i = 0; i < dim; ++i)
            p.coords[i] = out.means[c][i] + static_cast<float>(point_rng.normal());
        out.points.push_back(std::move(p));
    }

    Rng query_rng(derive_seed(seed, 2));
    out.queries.reserve(query_count);
    for (std::size_t j = 0; j < query_count; ++j) {
        auto c = static_cast<std::size_t>(query_rng.uniform_index(components));
        Point q;
        q.coords.resize(dim);
        for (std::size_t i = 0; i < dim; ++i)
            q.coords[i] = out.means[c][i] + static_cast<float>(query_rng.normal());
        out.queries.push_back(std::move(q));
    }
    return out;
}

double poisson_tail(double d, double lambda) {
    if (!(d >= 0.0) || !(lambda >= 0.0))
        throw DomainError("poisson tail: needs 0 <= d <= lambda");
    if (d > lambda) throw DomainError("poisson tail: d exceeds lambda");
    if (d == 0.0) return std::exp(-lambda);
    return std::exp(d - lambda + d * std::log(lambda / d));
}

double poisson_thin_mean(double m, double p) {
    if (!(m >= 0.0)) throw DomainError("thinning: mean must be >= 0");
    if (!(p >= 0.0) || !(p <= 1.0)) throw DomainError("thinning: rate outside [0, 1]");
    return m * p;
}

namespace {

void check_bound_args(double n, double eta, double m) {
    if (!(n >= 2.0)) throw DomainError("failure bound: n must be >= 2");
    if (!(eta >= 0.0) || !(eta <= 1.0))
        throw DomainError("failure bound: eta outside [0, 1]");
    if (!(m >= 0.0)) throw DomainError("failure bound: m must be >= 0");
}

}  // namespace

double ann_failure_bound(double n, double eta, double m) {
    check_bound_args(n, eta, m);
    double mp = m * std::pow(n, -eta);
    double tail = std::exp(-1.0) + (std::exp(1.0) - 1.0) * std::exp(-(mp + 1.0));
    return 1.0 / (3.0 * std::pow(n, eta)) + tail;
}

double turnstile_failure_bound(double n, double eta, double m, double d) {
    check_bound_args(n, eta, m);
    double mp = m * std::pow(n, -eta);
    if (!(d >= 0.0) || d > mp)
        throw DomainError("failure bound: d outside [0, m n^-eta]");
    double inv_e = std::exp(-1.0);
    return 1.0 / (3.0 * std::pow(n, eta)) + inv_e +
           poisson_tail(d, mp) * (1.0 - inv_e);
}

JlIndex::JlIndex(const std::vector<IdPoint>& points, std::size_t target_dim,
                 std::uint64_t seed)
    : target_dim_(target_dim) {
    if (target_dim == 0) throw ParameterError("jl: target dim must be >= 1");
    if (points.empty()) return;
    dim_ = points[0].point.dim();
    if (target_dim_ > dim_)
        throw ParameterError("jl: target dim exceeds data dim");
    matrix_.resize(target_dim_ * dim_);
    Rng rng(derive_seed(seed, 0));
    double scale = 1.0 / std::sqrt(static_cast<double>(target_dim_));
    for (float& v : matrix_) v = static_cast<float>(rng.normal() * scale);

    ids_.reserve(points.size());
    originals_.reserve(points.size());
    projected_.reserve(points.size() * target_dim_);
    for (const IdPoint& item : points) {
        if (item.point.dim() != dim_)
            throw ShapeError("jl: mixed dimensions in input");
        ids_.push_back(item.id);
        originals_.push_back(item.point);
        std::vector<float> proj = project(item.point);
        projected_.insert(projected_.end(), proj.begin(), proj.end());
    }
}

std::vector<float> JlIndex::project(const Point& q) const {
    if (q.dim() != dim_) throw ShapeError("jl: dimension mismatch");
    std::vector<float> out(target_dim_, 0.0f);
    for (std::size_t j = 0; j < target_dim_; ++j) {
        const float* row = matrix_.data() + j * dim_;
        double acc = 0.0;
        for (std::size_t i = 0; i < dim_; ++i)
            acc += static_cast<double>(row[i]) * static_cast<double>(q[i]);
        out[j] = static_cast<float>(acc);
    }
    return out;
}

std::optional<Neighbor> JlIndex::query(const Point& q) const {
    if (ids_.empty()) return std::nullopt;
    std::vector<float> qp = project(q);
    std::size_t best = 0;
    double best_sq = -1.0;
    for (std::size_t idx = 0; idx < ids_.size(); ++idx) {
        const float* row = projected_.data() + idx * target_dim_;
        double sq = 0.0;
        for (std::size_t j = 0; j < target_dim_; ++j) {
            double d = static_cast<double>(row[j]) - static_cast<double>(qp[j]);
            sq += d * d;
        }
        if (best_sq < 0.0 || sq < best_sq ||
            (sq == best_sq && ids_[idx] < ids_[best])) {
            best_sq = sq;
            best = idx;
        }
    }
    return Neighbor{ids_[best], euclidean_distance(originals_[best], q)};
}

std::vector<std::uint64_t> JlIndex::query_topk(const Point& q,
                                               std::size_t count) const {
    if (ids_.empty()) return {};
    std::vector<float> qp = project(q);
    std::vector<std::pair<double, std::uint64_t>> order;
    order.reserve(ids_.size());
    for (std::size_t idx = 0; idx < ids_.size(); ++idx) {
        const float* row = projected_.data() + idx * target_dim_;
        double sq = 0.0;
        for (std::size_t j = 0; j < target_dim_; ++j) {
            double d = static_cast<double>(row[j]) - static_cast<double>(qp[j]);
            sq += d * d;
        }
        order.emplace_back(sq, ids_[idx]);
    }
    std::size_t keep = std::min(count, order.size());
    std::partial_sort(order.begin(), order.begin() + keep, order.end());
    std::vector<std::uint64_t> out;
    out.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) out.push_back(order[i].second);
    return out;
}

double JlIndex::compression() const {
    if (dim_ == 0) return 0.0;
    return static_cast<double>(target_dim_) / static_cast<double>(dim_);
}

std::uint64_t JlIndex::bytes_estimate() const {
    return static_cast<std::uint64_t>(ids_.size()) * target_dim_ * 4;
}

}  // namespace streamsketch
