#include "streamsketch/sann.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "binio.hpp"
#include "streamsketch/errors.hpp"

namespace streamsketch {

DerivedParams derive_params(std::size_t n, double p1, double p2) {
    if (n < 2) throw ParameterError("derive_params: n must be >= 2");
    if (!(p2 > 0.0) || !(p1 < 1.0) || !(p1 > p2))
        throw ParameterError("derive_params: need 0 < p2 < p1 < 1");
    DerivedParams out;
    double log_inv_p2 = std::log(1.0 / p2);
    out.rho = std::log(1.0 / p1) / log_inv_p2;
    double nd = static_cast<double>(n);
    out.k = static_cast<std::uint32_t>(std::ceil(std::log(nd) / log_inv_p2));
    out.tables =
        static_cast<std::size_t>(std::ceil(std::pow(nd, out.rho) / p1));
    return out;
}

namespace {

void validate_config(SannConfig& cfg) {
    if (cfg.n < 2) throw ParameterError("sketch: n must be >= 2");
    if (!(cfg.eta >= 0.0) || !(cfg.eta <= 1.0))
        throw ParameterError("sketch: eta must be in [0, 1]");
    if (!(cfg.r > 0.0)) throw ParameterError("sketch: r must be > 0");
    if (!(cfg.c > 1.0)) throw ParameterError("sketch: c must be > 1");
    if (cfg.dim < 1) throw ParameterError("sketch: dim must be >= 1");
    DerivedParams derived = derive_params(cfg.n, cfg.p1, cfg.p2);
    if (cfg.k == 0) cfg.k = derived.k;
    if (cfg.tables == 0) cfg.tables = derived.tables;
    if (cfg.base.kind == FamilyKind::srp) {
        if (cfg.k > 62) throw ParameterError("sketch: srp concatenation must be <= 62");
    } else {
        if (!(cfg.base.width > 0.0))
            throw ParameterError("sketch: width must be > 0");
        if (cfg.base.range_per_hash < 2)
            throw ParameterError("sketch: range per hash must be >= 2");
        checked_pow_u64(cfg.base.range_per_hash, cfg.k);
    }
}

}  // namespace

std::uint32_t SannSketch::BucketTable::get(std::uint64_t key) const {
    if (keys_.empty()) return kNil;
    std::size_t mask = keys_.size() - 1;
    std::size_t idx = mix64(key) & mask;
    while (heads_[idx] != kVacant) {
        if (keys_[idx] == key) return heads_[idx];
        idx = (idx + 1) & mask;
    }
    return kNil;
}

void SannSketch::BucketTable::grow() {
    std::size_t cap = keys_.empty() ? 16 : keys_.size() * 2;
    std::vector<std::uint64_t> old_keys = std::move(keys_);
    std::vector<std::uint32_t> old_heads = std::move(heads_);
    keys_.assign(cap, 0);
    heads_.assign(cap, kVacant);
    used_ = 0;
    std::size_t mask = cap - 1;
    for (std::size_t i = 0; i < old_keys.size(); ++i) {
        // Entries whose chain emptied out are dropped here.
        if (old_heads[i] == kVacant || old_heads[i] == kNil) continue;
        std::size_t idx = mix64(old_keys[i]) & mask;
        while (heads_[idx] != kVacant) idx = (idx + 1) & mask;
        keys_[idx] = old_keys[i];
        heads_[idx] = old_heads[i];
        ++used_;
    }
}

void SannSketch::BucketTable::set(std::uint64_t key, std::uint32_t head) {
    if (keys_.empty() || used_ * 10 >= keys_.size() * 7) grow();
    std::size_t mask = keys_.size() - 1;
    std::size_t idx = mix64(key) & mask;
    while (heads_[idx] != kVacant) {
        if (keys_[idx] == key) {
            heads_[idx] = head;
            return;
        }
        idx = (idx + 1) & mask;
    }
    keys_[idx] = key;
    heads_[idx] = head;
    ++used_;
}

SannSketch::SannSketch(const SannConfig& cfg) : cfg_(cfg) {
    validate_config(cfg_);
    DerivedParams derived = derive_params(cfg_.n, cfg_.p1, cfg_.p2);
    rho_ = derived.rho;
    sample_rate_ = std::pow(static_cast<double>(cfg_.n), -cfg_.eta);
    hashes_.reserve(cfg_.tables);
    for (std::size_t j = 0; j < cfg_.tables; ++j)
        hashes_.emplace_back(cfg_.base, cfg_.dim, cfg_.k,
                             derive_seed(cfg_.seed, j));
    tables_.resize(cfg_.tables);
    rng_ = Rng(derive_seed(cfg_.seed, 0x5a5a5a5a5a5a5a5aULL));
}

std::uint32_t SannSketch::alloc_slot(std::uint64_t id, const Point& x) {
    std::uint32_t slot;
    if (!free_slots_.empty()) {
        slot = free_slots_.back();
        free_slots_.pop_back();
        slot_points_[slot] = x;
        slot_ids_[slot] = id;
    } else {
        slot = static_cast<std::uint32_t>(slot_points_.size());
        slot_points_.push_back(x);
        slot_ids_.push_back(id);
    }
    id_to_slot_.emplace(id, slot);
    return slot;
}

void SannSketch::index_slot(std::uint32_t slot, const Point& x) {
    for (std::size_t j = 0; j < cfg_.tables; ++j) {
        BucketId key = hashes_[j](x);
        std::uint32_t node;
        if (!free_nodes_.empty()) {
            node = free_nodes_.back();
            free_nodes_.pop_back();
        } else {
            node = static_cast<std::uint32_t>(nodes_.size());
            nodes_.emplace_back();
        }
        nodes_[node].slot = slot;
        nodes_[node].next = tables_[j].get(key);
        tables_[j].set(key, node);
    }
}

void SannSketch::place(std::uint64_t id, const Point& x) {
    index_slot(alloc_slot(id, x), x);
}

bool SannSketch::insert(std::uint64_t id, const Point& x) {
    if (seen_ >= cfg_.n)
        throw ParameterError("sketch: stream exceeds the declared bound n");
    if (x.dim() != cfg_.dim) throw ShapeError("sketch: dimension mismatch");
    if (id_to_slot_.count(id))
        throw DuplicateError("sketch: id is already retained");
    ++seen_;
    if (!rng_.bernoulli(sample_rate_)) return false;
    place(id, x);
    return true;
}

bool SannSketch::erase(std::uint64_t id) {
    auto it = id_to_slot_.find(id);
    if (it == id_to_slot_.end()) return false;
    std::uint32_t slot = it->second;
    Point x = std::move(slot_points_[slot]);
    for (std::size_t j = 0; j < cfg_.tables; ++j) {
        BucketId key = hashes_[j](x);
        std::uint32_t node = tables_[j].get(key);
        std::uint32_t prev = BucketTable::kNil;
        while (node != BucketTable::kNil) {
            if (nodes_[node].slot == slot) {
                if (prev == BucketTable::kNil)
                    tables_[j].set(key, nodes_[node].next);
                else
                    nodes_[prev].next = nodes_[node].next;
                free_nodes_.push_back(node);
                break;
            }
            prev = node;
            node = nodes_[node].next;
        }
    }
    slot_points_[slot] = Point{};
    free_slots_.push_back(slot);
    id_to_slot_.erase(it);
    return true;
}

void SannSketch::restore(std::uint64_t id, const Point& x) {
    if (x.dim() != cfg_.dim) throw ShapeError("sketch: dimension mismatch");
    if (id_to_slot_.count(id))
        throw DuplicateError("sketch: id is already retained");
    place(id, x);
}

QueryOutcome SannSketch::query(const Point& q) const {
    return query(q, nullptr);
}

QueryOutcome SannSketch::query(const Point& q,
                               std::vector<std::uint64_t>* candidates) const {
    if (q.dim() != cfg_.dim) throw ShapeError("sketch: dimension mismatch");
    QueryOutcome out;
    std::vector<std::uint32_t> slots;
    std::size_t cap = 3 * cfg_.tables;
    for (std::size_t j = 0; j < cfg_.tables; ++j) {
        std::uint32_t node = tables_[j].get(hashes_[j](q));
        while (node != BucketTable::kNil) {
            slots.push_back(nodes_[node].slot);
            node = nodes_[node].next;
        }
        if (slots.size() >= cap) break;
    }
    out.candidates_examined = slots.size();
    std::sort(slots.begin(), slots.end());
    slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
    if (candidates != nullptr) {
        candidates->clear();
        candidates->reserve(slots.size());
        for (std::uint32_t slot : slots) candidates->push_back(slot_ids_[slot]);
    }

    bool have = false;
    double best_sq = 0.0;
    std::uint64_t best_id = 0;
    for (std::uint32_t slot : slots) {
        double sq = squared_distance(slot_points_[slot], q);
        std::uint64_t id = slot_ids_[slot];
        if (!have || sq < best_sq || (sq == best_sq && id < best_id)) {
            have = true;
            best_sq = sq;
            best_id = id;
        }
    }
    if (have) {
        double dist = std::sqrt(best_sq);
        if (dist <= cfg_.c * cfg_.r) out.result = Neighbor{best_id, dist};
    }
    return out;
}

std::vector<QueryOutcome> SannSketch::query_batch(
    const std::vector<Point>& queries) const {
    for (const Point& q : queries)
        if (q.dim() != cfg_.dim) throw ShapeError("sketch: dimension mismatch");
    std::vector<QueryOutcome> out;
    out.reserve(queries.size());
    for (const Point& q : queries) out.push_back(query(q));
    return out;
}

MemoryReport SannSketch::memory_report() const {
    MemoryReport report;
    report.points_stored = stored_count();
    report.bucket_entries =
        static_cast<std::uint64_t>(cfg_.tables) * report.points_stored;
    report.bytes_estimate =
        report.points_stored * static_cast<std::uint64_t>(cfg_.dim) * 4 +
        (report.bucket_entries + report.points_stored) * 8;
    return report;
}

std::vector<IdPoint> SannSketch::retained() const {
    std::vector<IdPoint> out;
    out.reserve(id_to_slot_.size());
    for (const auto& [id, slot] : id_to_slot_)
        out.push_back(IdPoint{id, slot_points_[slot]});
    std::sort(out.begin(), out.end(),
              [](const IdPoint& a, const IdPoint& b) { return a.id < b.id; });
    return out;
}

BucketId SannSketch::table_hash(std::size_t table, const Point& x) const {
    if (table >= hashes_.size()) throw ParameterError("sketch: table out of range");
    return hashes_[table](x);
}

std::vector<std::uint64_t> SannSketch::bucket_contents(std::size_t table,
                                                       BucketId bucket) const {
    if (table >= tables_.size()) throw ParameterError("sketch: table out of range");
    std::vector<std::uint64_t> ids;
    std::uint32_t node = tables_[table].get(bucket);
    while (node != BucketTable::kNil) {
        ids.push_back(slot_ids_[nodes_[node].slot]);
        node = nodes_[node].next;
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

void SannSketch::save(std::ostream& out) const {
    binio::write_magic(out, "SANN");
    binio::write_u32(out, 1);
    binio::write_u64(out, cfg_.n);
    binio::write_f64(out, cfg_.eta);
    binio::write_f64(out, cfg_.r);
    binio::write_f64(out, cfg_.c);
    binio::write_f64(out, cfg_.p1);
    binio::write_f64(out, cfg_.p2);
    binio::write_u32(out, cfg_.k);
    binio::write_u64(out, cfg_.tables);
    binio::write_u64(out, cfg_.dim);
    binio::write_u8(out, static_cast<std::uint8_t>(cfg_.base.kind));
    binio::write_f64(out, cfg_.base.width);
    binio::write_u64(out, cfg_.base.range_per_hash);
    binio::write_u64(out, cfg_.seed);
    binio::write_u64(out, seen_);

    std::ostringstream rng_text;
    rng_text << rng_.engine();
    std::string state = rng_text.str();
    binio::write_u64(out, state.size());
    out.write(state.data(), static_cast<std::streamsize>(state.size()));

    std::vector<IdPoint> items = retained();
    binio::write_u64(out, items.size());
    for (const IdPoint& item : items) {
        binio::write_u64(out, item.id);
        for (float v : item.point.coords)
            binio::write_u32(out, std::bit_cast<std::uint32_t>(v));
    }
    if (!out) throw FormatError("failed to write sketch snapshot");
}

SannSketch SannSketch::load(std::istream& in) {
    binio::expect_magic(in, "SANN");
    std::uint32_t version = binio::read_u32(in);
    if (version != 1) throw FormatError("unsupported sketch snapshot version");
    SannConfig cfg;
    cfg.n = binio::read_u64(in);
    cfg.eta = binio::read_f64(in);
    cfg.r = binio::read_f64(in);
    cfg.c = binio::read_f64(in);
    cfg.p1 = binio::read_f64(in);
    cfg.p2 = binio::read_f64(in);
    cfg.k = binio::read_u32(in);
    cfg.tables = binio::read_u64(in);
    cfg.dim = binio::read_u64(in);
    cfg.base.kind = static_cast<FamilyKind>(binio::read_u8(in));
    cfg.base.width = binio::read_f64(in);
    cfg.base.range_per_hash = binio::read_u64(in);
    cfg.seed = binio::read_u64(in);

    SannSketch sketch(cfg);
    sketch.seen_ = binio::read_u64(in);

    std::uint64_t state_len = binio::read_u64(in);
    std::string state(state_len, '\0');
    in.read(state.data(), static_cast<std::streamsize>(state_len));
    if (static_cast<std::uint64_t>(in.gcount()) != state_len)
        throw FormatError("snapshot blob truncated");
    std::istringstream rng_text(state);
    rng_text >> sketch.rng_.engine();
    if (rng_text.fail()) throw FormatError("bad generator state in snapshot");

    std::uint64_t count = binio::read_u64(in);
    for (std::uint64_t i = 0; i < count; ++i) {
        std::uint64_t id = binio::read_u64(in);
        Point p;
        p.coords.resize(cfg.dim);
        for (std::size_t d = 0; d < cfg.dim; ++d)
            p.coords[d] = std::bit_cast<float>(binio::read_u32(in));
        sketch.place(id, p);
    }
    return sketch;
}

}  // namespace streamsketch
