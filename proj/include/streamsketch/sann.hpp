#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include "streamsketch/lsh.hpp"
#include "streamsketch/point.hpp"
#include "streamsketch/rng.hpp"

namespace streamsketch {

/// Hash-table sizing derived from the base collision probabilities.
struct DerivedParams {
    double rho = 0.0;       // ln(1/p1) / ln(1/p2)
    std::uint32_t k = 0;    // ceil(ln n / ln(1/p2))
    std::size_t tables = 0; // ceil(n^rho / p1)
};

/// rho/k/tables for a stream bound n and base collision probabilities
/// p1 > p2 (at radius r and c*r respectively).
DerivedParams derive_params(std::size_t n, double p1, double p2);

struct SannConfig {
    std::size_t n = 0;       // declared stream length bound
    double eta = 0.5;        // sampling exponent; retention rate is n^-eta
    double r = 1.0;          // query radius
    double c = 2.0;          // approximation factor (> 1)
    double p1 = 0.0;         // base collision probability at distance r
    double p2 = 0.0;         // base collision probability at distance c*r
    std::uint32_t k = 0;     // concatenation length; 0 derives it from p2
    std::size_t tables = 0;  // table count L; 0 derives it from p1/p2
    std::size_t dim = 0;
    BaseHashSpec base;
    std::uint64_t seed = 0;
};

struct QueryOutcome {
    std::optional<Neighbor> result;  // within c*r of the query, or empty
    std::size_t candidates_examined = 0;

    bool operator==(const QueryOutcome& other) const {
        return result == other.result &&
               candidates_examined == other.candidates_examined;
    }
};

struct MemoryReport {
    std::uint64_t points_stored = 0;
    std::uint64_t bucket_entries = 0;  // tables * points_stored
    std::uint64_t bytes_estimate = 0;  // 4 bytes/coordinate + 8 bytes/id entry
};

/// Streaming near-neighbor sketch: each arriving point is kept with
/// probability n^-eta (one Bernoulli draw per insert) and retained points
/// are indexed in L hash tables of length-k concatenated hashes. Queries
/// scan the query's buckets in table order, stop once 3L candidates have
/// been collected, and return the closest candidate if it lies within c*r.
///
/// Single writer; queries are const and may run between writes.
class SannSketch {
  public:
    explicit SannSketch(const SannConfig& cfg);

    /// One stream arrival. Returns whether the point was retained.
    /// Rejects inserts beyond the declared bound n, mismatched dimensions,
    /// and ids equal to a currently retained id.
    bool insert(std::uint64_t id, const Point& x);

    /// Removes a retained id from the store and every table. Unknown or
    /// never-retained ids are a no-op returning false.
    bool erase(std::uint64_t id);

    /// Re-admits a previously retained point after erase, bypassing the
    /// sampling draw. Exists so deletion experiments can undo themselves;
    /// regular arrivals must go through insert.
    void restore(std::uint64_t id, const Point& x);

    QueryOutcome query(const Point& q) const;

    /// Same as query, but also reports the deduplicated candidate ids the
    /// scan examined (for recall measurements against an exact index).
    QueryOutcome query(const Point& q,
                       std::vector<std::uint64_t>* candidates) const;

    /// Element-wise identical to running query on each element. All
    /// dimensions are validated before any query runs.
    std::vector<QueryOutcome> query_batch(const std::vector<Point>& queries) const;

    std::size_t stored_count() const { return id_to_slot_.size(); }
    std::size_t seen_count() const { return seen_; }
    MemoryReport memory_report() const;

    const SannConfig& config() const { return cfg_; }
    double sample_rate() const { return sample_rate_; }
    double rho() const { return rho_; }

    /// Retained points, ordered by id.
    std::vector<IdPoint> retained() const;

    BucketId table_hash(std::size_t table, const Point& x) const;
    /// Ids currently in one bucket, sorted.
    std::vector<std::uint64_t> bucket_contents(std::size_t table,
                                               BucketId bucket) const;

    /// Binary snapshot blob; identical bytes for identical state.
    void save(std::ostream& out) const;
    static SannSketch load(std::istream& in);

  private:
    // Open-addressed bucket directory of one table: maps a bucket id to the
    // head of its chain in the shared node arena. Values kNil mark an empty
    // chain; vacant probe slots are internal.
    class BucketTable {
      public:
        static constexpr std::uint32_t kNil = 0xfffffffe;

        std::uint32_t get(std::uint64_t key) const;
        void set(std::uint64_t key, std::uint32_t head);

      private:
        static constexpr std::uint32_t kVacant = 0xffffffff;

        void grow();

        std::vector<std::uint64_t> keys_;
        std::vector<std::uint32_t> heads_;
        std::size_t used_ = 0;
    };

    struct Node {
        std::uint32_t slot = 0;
        std::uint32_t next = BucketTable::kNil;
    };

    std::uint32_t alloc_slot(std::uint64_t id, const Point& x);
    void index_slot(std::uint32_t slot, const Point& x);
    void place(std::uint64_t id, const Point& x);

    SannConfig cfg_;
    double rho_ = 0.0;
    double sample_rate_ = 1.0;
    std::vector<ComposedHash> hashes_;  // one per table
    std::vector<BucketTable> tables_;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> free_nodes_;
    std::vector<Point> slot_points_;
    std::vector<std::uint64_t> slot_ids_;
    std::vector<std::uint32_t> free_slots_;
    std::unordered_map<std::uint64_t, std::uint32_t> id_to_slot_;
    std::size_t seen_ = 0;
    Rng rng_{0};
};

}  // namespace streamsketch
