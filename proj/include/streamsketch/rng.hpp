#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace streamsketch {

/// 64-bit finalizer (murmur3 style). Bijective, maps 0 to 0, which keeps the
/// range-bounded value of a zero raw hash at bucket 0.
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
}

/// Splitmix-style expansion of one root seed into per-row seeds.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
    std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic random source. Gaussian draws use Box-Muller directly so the
/// stream does not depend on the standard library's distribution internals.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        double u2 = uniform();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Fills a Poisson draw; inversion for small means, PTRS-style rejection
    /// is not needed at the rates used here, so large means use a normal
    /// approximation refined by exact inversion on the remainder.
    std::uint64_t poisson(double mean);

    std::mt19937_64& engine() { return eng_; }
    const std::mt19937_64& engine() const { return eng_; }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline std::uint64_t Rng::poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 60.0) {
        double limit = std::exp(-mean);
        std::uint64_t count = 0;
        double product = uniform();
        while (product > limit) {
            ++count;
            product *= uniform();
        }
        return count;
    }
    // Split recursively: Poisson(a + b) = Poisson(a) + Poisson(b).
    double half = std::floor(mean / 2.0);
    return poisson(half) + poisson(mean - half);
}

} // namespace streamsketch
