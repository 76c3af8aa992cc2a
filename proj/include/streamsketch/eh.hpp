#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace streamsketch {

/// Exponential histogram over a sliding window of `window` time ticks.
/// Counts arrivals of weight >= 1 at non-decreasing integer timestamps and
/// answers windowed-count queries with relative error at most eps_prime.
///
/// Buckets hold power-of-two counts. With k = ceil(1/eps_prime), every size
/// class keeps between ceil(k/2) and ceil(k/2)+1 buckets (the oldest class
/// may hold fewer); reaching one past the upper band merges the two oldest
/// buckets of that class into one of twice the size carrying the newer
/// timestamp. This keeps the oldest bucket's count at most a 1/k fraction of
/// twice the newer mass, which is what bounds the estimate error.
class ExpHistogram {
  public:
    ExpHistogram(double eps_prime, std::int64_t window);

    /// Adds `amount` unit arrivals at time t, costing O(amount) amortized
    /// bucket operations; the error guarantee counts each unit separately.
    void add(std::int64_t t, std::uint64_t amount = 1);

    /// Drops every bucket whose newest timestamp is <= now - window.
    void expire(std::int64_t now);

    /// Windowed-count estimate at time `now`; expires lazily, then answers
    /// from cached totals in constant time. The half-size correction for the
    /// oldest bucket applies only when that bucket actually straddles the
    /// window boundary; a bucket whose oldest element is still inside the
    /// window contributes exactly.
    double estimate(std::int64_t now);

    /// Same value as estimate(now) but without mutation; skips expired
    /// buckets arithmetically instead of dropping them.
    double peek(std::int64_t now) const;

    std::size_t bucket_count() const { return count_; }
    std::uint64_t total() const { return total_; }
    double eps_prime() const { return eps_prime_; }
    std::int64_t window() const { return window_; }
    std::uint32_t k() const { return k_; }
    std::int64_t last_add_time() const { return last_add_; }

    /// Cumulative number of buckets dropped by expiry (diagnostic).
    std::uint64_t dropped_buckets() const { return dropped_; }
    /// Cumulative number of bucket merges (diagnostic).
    std::uint64_t merge_count() const { return merges_; }

    struct Bucket {
        std::uint64_t size;   // power of two
        std::int64_t newest;  // timestamp of the newest arrival
        std::int64_t oldest;  // timestamp of the oldest arrival
    };

    /// Snapshot of all buckets ordered newest to oldest.
    std::vector<Bucket> buckets() const;

    /// Rebuilds a histogram from a bucket snapshot (deserialization).
    static ExpHistogram from_buckets(double eps_prime, std::int64_t window,
                                     const std::vector<Bucket>& recs);

    /// Upper bound on bucket_count(): (ceil(k/2)+1)(log2(2N/k+1)+1)+1, where
    /// N is the maximum mass inside one window (the window length for
    /// streams of unit adds).
    static double bucket_bound(double eps_prime, std::int64_t window);

  private:
    struct Rec {
        std::int64_t newest;
        std::int64_t oldest;
    };

    std::size_t merge_trigger(std::size_t cls) const;
    void cascade(std::size_t cls);
    void refresh_oldest();

    double eps_prime_ = 1.0;
    std::int64_t window_ = 1;
    std::uint32_t k_ = 1;
    // classes_[c] holds the size-2^c buckets ordered oldest first.
    std::vector<std::vector<Rec>> classes_;
    std::uint64_t total_ = 0;
    std::size_t count_ = 0;
    std::int64_t last_add_ = 0;
    bool saw_add_ = false;
    // Location of the bucket with the minimum newest timestamp.
    std::size_t oldest_cls_ = 0;
    std::int64_t oldest_newest_ = 0;
    std::int64_t oldest_oldest_ = 0;
    std::uint64_t dropped_ = 0;
    std::uint64_t merges_ = 0;
};

} // namespace streamsketch
