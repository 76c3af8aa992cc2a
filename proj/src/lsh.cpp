#include "streamsketch/lsh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "streamsketch/errors.hpp"
#include "streamsketch/rng.hpp"

namespace streamsketch {

std::uint64_t checked_pow_u64(std::uint64_t base, std::uint32_t exp) {
    std::uint64_t result = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / base)
            throw ParameterError("hash range overflows 64 bits");
        result *= base;
    }
    return result;
}

SrpFamily::SrpFamily(std::size_t dim, std::uint32_t bits, std::uint64_t seed)
    : dim_(dim), bits_(bits), seed_(seed) {
    if (dim == 0) throw ParameterError("srp: dim must be >= 1");
    if (bits < 1 || bits > 62) throw ParameterError("srp: bits must be in [1, 62]");
    planes_.resize(static_cast<std::size_t>(bits) * dim);
    Rng rng(derive_seed(seed, 0));
    for (float& v : planes_) v = static_cast<float>(rng.normal());
}

BucketId SrpFamily::hash(const Point& x) const {
    if (x.dim() != dim_) throw ShapeError("srp: point dimension mismatch");
    BucketId id = 0;
    const float* px = x.data();
    for (std::uint32_t j = 0; j < bits_; ++j) {
        const float* row = planes_.data() + static_cast<std::size_t>(j) * dim_;
        double acc = 0.0;
        for (std::size_t i = 0; i < dim_; ++i)
            acc += static_cast<double>(row[i]) * static_cast<double>(px[i]);
        if (acc >= 0.0) id |= BucketId{1} << j;
    }
    return id;
}

PStableFamily::PStableFamily(std::size_t dim, std::uint32_t count, double width,
                             std::uint64_t range_per_hash, std::uint64_t seed)
    : dim_(dim), count_(count), width_(width), range_per_hash_(range_per_hash) {
    validate();
    range_ = checked_pow_u64(range_per_hash_, count_);
    projections_.resize(static_cast<std::size_t>(count) * dim);
    offsets_.resize(count);
    Rng rng(derive_seed(seed, 0));
    for (float& v : projections_) v = static_cast<float>(rng.normal());
    for (double& b : offsets_) b = rng.uniform(0.0, width);
}

PStableFamily::PStableFamily(std::size_t dim, std::vector<float> projections,
                             std::vector<double> offsets, double width,
                             std::uint64_t range_per_hash)
    : dim_(dim), count_(static_cast<std::uint32_t>(offsets.size())), width_(width),
      range_per_hash_(range_per_hash), projections_(std::move(projections)),
      offsets_(std::move(offsets)) {
    validate();
    if (projections_.size() != static_cast<std::size_t>(count_) * dim_)
        throw ParameterError("p-stable: projection matrix shape mismatch");
    range_ = checked_pow_u64(range_per_hash_, count_);
}

void PStableFamily::validate() const {
    if (dim_ == 0) throw ParameterError("p-stable: dim must be >= 1");
    if (count_ < 1) throw ParameterError("p-stable: count must be >= 1");
    if (!(width_ > 0.0)) throw ParameterError("p-stable: width must be > 0");
    if (range_per_hash_ < 2) throw ParameterError("p-stable: range per hash must be >= 2");
}

std::int64_t PStableFamily::base_value(const Point& x, std::uint32_t j) const {
    if (x.dim() != dim_) throw ShapeError("p-stable: point dimension mismatch");
    const float* row = projections_.data() + static_cast<std::size_t>(j) * dim_;
    const float* px = x.data();
    double acc = offsets_[j];
    for (std::size_t i = 0; i < dim_; ++i)
        acc += static_cast<double>(row[i]) * static_cast<double>(px[i]);
    return static_cast<std::int64_t>(std::floor(acc / width_));
}

BucketId PStableFamily::hash(const Point& x) const {
    if (x.dim() != dim_) throw ShapeError("p-stable: point dimension mismatch");
    const float* px = x.data();
    BucketId id = 0;
    BucketId weight = 1;
    for (std::uint32_t j = 0; j < count_; ++j) {
        const float* row = projections_.data() + static_cast<std::size_t>(j) * dim_;
        double acc = offsets_[j];
        for (std::size_t i = 0; i < dim_; ++i)
            acc += static_cast<double>(row[i]) * static_cast<double>(px[i]);
        auto raw = static_cast<std::int64_t>(std::floor(acc / width_));
        BucketId bounded = mix64(static_cast<std::uint64_t>(raw)) % range_per_hash_;
        id += bounded * weight;
        weight *= range_per_hash_;
    }
    return id;
}

ComposedHash::ComposedHash(const BaseHashSpec& spec, std::size_t dim,
                           std::uint32_t power, std::uint64_t seed)
    : kind_(spec.kind) {
    if (kind_ == FamilyKind::srp) {
        srp_.emplace(dim, power, seed);
    } else {
        p_stable_.emplace(dim, power, spec.width, spec.range_per_hash, seed);
    }
}

BucketId ComposedHash::operator()(const Point& x) const {
    return kind_ == FamilyKind::srp ? srp_->hash(x) : p_stable_->hash(x);
}

std::uint64_t ComposedHash::range() const {
    return kind_ == FamilyKind::srp ? srp_->range() : p_stable_->range();
}

std::uint32_t ComposedHash::power() const {
    return kind_ == FamilyKind::srp ? srp_->bits() : p_stable_->count();
}

std::size_t ComposedHash::dim() const {
    return kind_ == FamilyKind::srp ? srp_->dim() : p_stable_->dim();
}

double srp_collision_prob(const Point& x, const Point& y, std::uint32_t p) {
    double nx = norm(x);
    double ny = norm(y);
    if (nx == 0.0 || ny == 0.0)
        throw DomainError("srp collision probability undefined for zero vectors");
    double cosine = dot(x, y) / (nx * ny);
    cosine = std::clamp(cosine, -1.0, 1.0);
    double theta = std::acos(cosine);
    return std::pow(1.0 - theta / 3.14159265358979323846, static_cast<double>(p));
}

namespace {

bool base_hash_collides(const BaseHashSpec& spec, const Point& x, const Point& y,
                        Rng& rng) {
    std::size_t dim = x.dim();
    if (spec.kind == FamilyKind::srp) {
        double ax = 0.0;
        double ay = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            double coeff = rng.normal();
            ax += coeff * static_cast<double>(x[i]);
            ay += coeff * static_cast<double>(y[i]);
        }
        return (ax >= 0.0) == (ay >= 0.0);
    }
    double b = rng.uniform(0.0, spec.width);
    double ax = b;
    double ay = b;
    for (std::size_t i = 0; i < dim; ++i) {
        double coeff = rng.normal();
        ax += coeff * static_cast<double>(x[i]);
        ay += coeff * static_cast<double>(y[i]);
    }
    auto rx = static_cast<std::int64_t>(std::floor(ax / spec.width));
    auto ry = static_cast<std::int64_t>(std::floor(ay / spec.width));
    std::uint64_t bx = mix64(static_cast<std::uint64_t>(rx)) % spec.range_per_hash;
    std::uint64_t by = mix64(static_cast<std::uint64_t>(ry)) % spec.range_per_hash;
    return bx == by;
}

} // namespace

double estimate_collision_prob(const BaseHashSpec& spec, double dist,
                               std::size_t dim, std::size_t trials,
                               std::uint64_t seed) {
    if (dim == 0) throw ParameterError("collision estimate: dim must be >= 1");
    if (trials == 0) throw ParameterError("collision estimate: trials must be >= 1");
    if (dist < 0.0) throw ParameterError("collision estimate: dist must be >= 0");
    if (spec.kind == FamilyKind::p_stable && !(spec.width > 0.0))
        throw ParameterError("collision estimate: width must be > 0");
    Rng rng(seed);
    std::size_t hits = 0;
    Point x, y;
    x.coords.resize(dim);
    y.coords.resize(dim);
    for (std::size_t t = 0; t < trials; ++t) {
        double unit = 0.0;
        while (unit == 0.0) {
            for (std::size_t i = 0; i < dim; ++i) {
                x.coords[i] = static_cast<float>(rng.normal());
                y.coords[i] = static_cast<float>(rng.normal());
            }
            // y currently holds a raw direction; normalize it to length dist.
            double len = 0.0;
            for (std::size_t i = 0; i < dim; ++i)
                len += static_cast<double>(y[i]) * static_cast<double>(y[i]);
            unit = std::sqrt(len);
        }
        for (std::size_t i = 0; i < dim; ++i)
            y.coords[i] = x.coords[i] + static_cast<float>(dist * static_cast<double>(y[i]) / unit);
        if (base_hash_collides(spec, x, y, rng)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(trials);
}

double estimate_collision_prob(const BaseHashSpec& spec, const Point& x,
                               const Point& y, std::size_t trials,
                               std::uint64_t seed) {
    require_same_dim(x, y);
    if (trials == 0) throw ParameterError("collision estimate: trials must be >= 1");
    Rng rng(seed);
    std::size_t hits = 0;
    for (std::size_t t = 0; t < trials; ++t)
        if (base_hash_collides(spec, x, y, rng)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(trials);
}

} // namespace streamsketch
