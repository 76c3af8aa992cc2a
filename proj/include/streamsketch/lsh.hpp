#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "streamsketch/point.hpp"

namespace streamsketch {

/// Non-negative bucket identifier produced by a hash family.
using BucketId = std::uint64_t;

enum class FamilyKind : std::uint8_t { srp = 0, p_stable = 1 };

/// base^exp in 64 bits; throws ParameterError on overflow.
std::uint64_t checked_pow_u64(std::uint64_t base, std::uint32_t exp);

/// Signed random projections: `bits` hyperplanes with standard normal
/// coefficients; bit j is 1 when the projection onto hyperplane j is >= 0
/// (an exactly zero projection therefore lands on 1). Bucket ids pack the
/// bits with bit j at weight 2^j, so the range is [0, 2^bits).
class SrpFamily {
  public:
    SrpFamily(std::size_t dim, std::uint32_t bits, std::uint64_t seed);

    BucketId hash(const Point& x) const;

    std::size_t dim() const { return dim_; }
    std::uint32_t bits() const { return bits_; }
    std::uint64_t range() const { return std::uint64_t{1} << bits_; }
    std::uint64_t seed() const { return seed_; }

  private:
    std::size_t dim_ = 0;
    std::uint32_t bits_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<float> planes_; // bits x dim, row major
};

/// Concatenation of `count` 2-stable (Gaussian) projections with quantization
/// width `width`. Each raw value floor((a_j . x + b_j) / width) is reduced to
/// [0, range_per_hash) through a 64-bit mix hash, and the bounded values are
/// combined positionally: id = sum_j r_j * range_per_hash^j.
class PStableFamily {
  public:
    PStableFamily(std::size_t dim, std::uint32_t count, double width,
                  std::uint64_t range_per_hash, std::uint64_t seed);

    /// Construction from explicit coefficients; projections is count x dim
    /// row major, offsets must lie in [0, width).
    PStableFamily(std::size_t dim, std::vector<float> projections,
                  std::vector<double> offsets, double width,
                  std::uint64_t range_per_hash);

    BucketId hash(const Point& x) const;

    /// Raw quantized projection j before range bounding.
    std::int64_t base_value(const Point& x, std::uint32_t j) const;

    std::size_t dim() const { return dim_; }
    std::uint32_t count() const { return count_; }
    double width() const { return width_; }
    std::uint64_t range_per_hash() const { return range_per_hash_; }
    std::uint64_t range() const { return range_; }

  private:
    void validate() const;

    std::size_t dim_ = 0;
    std::uint32_t count_ = 0;
    double width_ = 1.0;
    std::uint64_t range_per_hash_ = 2;
    std::uint64_t range_ = 0;
    std::vector<float> projections_; // count x dim, row major
    std::vector<double> offsets_;    // count entries in [0, width)
};

/// Collision probability of one signed-random-projection bit raised to the
/// p-fold concatenation: (1 - theta/pi)^p. Throws DomainError on zero vectors.
double srp_collision_prob(const Point& x, const Point& y, std::uint32_t p);

/// Describes a single base hash for Monte Carlo collision estimation.
struct BaseHashSpec {
    FamilyKind kind = FamilyKind::p_stable;
    double width = 1.0;               // p-stable quantization width
    std::uint64_t range_per_hash = 100; // p-stable range bound
};

/// A length-p concatenation of base hashes from either family, as used for
/// one table or one grid row. SRP concatenations have range 2^p, p-stable
/// ones range_per_hash^p.
class ComposedHash {
  public:
    ComposedHash(const BaseHashSpec& spec, std::size_t dim, std::uint32_t power,
                 std::uint64_t seed);

    BucketId operator()(const Point& x) const;

    FamilyKind kind() const { return kind_; }
    std::uint64_t range() const;
    std::uint32_t power() const;
    std::size_t dim() const;

  private:
    FamilyKind kind_;
    std::optional<SrpFamily> srp_;
    std::optional<PStableFamily> p_stable_;
};

/// Fraction of `trials` random pairs at exact distance `dist` (random point
/// plus a random unit direction scaled by dist) colliding under a freshly
/// drawn base hash per trial.
double estimate_collision_prob(const BaseHashSpec& spec, double dist,
                               std::size_t dim, std::size_t trials,
                               std::uint64_t seed);

/// Same estimator for one fixed pair: `trials` fresh base hashes on (x, y).
double estimate_collision_prob(const BaseHashSpec& spec, const Point& x,
                               const Point& y, std::size_t trials,
                               std::uint64_t seed);

} // namespace streamsketch
