#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "streamsketch/errors.hpp"
#include "streamsketch/rng.hpp"
#include "streamsketch/sann.hpp"

using namespace streamsketch;

namespace {

SannConfig make_cfg(std::size_t n, double eta, std::uint64_t seed,
                    std::size_t dim = 4) {
    SannConfig cfg;
    cfg.n = n;
    cfg.eta = eta;
    cfg.r = 0.5;
    cfg.c = 2.0;
    cfg.p1 = 0.5;
    cfg.p2 = 0.25;
    cfg.dim = dim;
    cfg.base.kind = FamilyKind::p_stable;
    cfg.base.width = 0.5;
    cfg.base.range_per_hash = 100;
    cfg.seed = seed;
    return cfg;
}

std::vector<IdPoint> random_points(std::size_t n, std::size_t dim,
                                   std::uint64_t seed) {
    Rng rng(seed);
    std::vector<IdPoint> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<float> c(dim);
        for (float& v : c) v = static_cast<float>(rng.uniform(-1.0, 1.0));
        pts.push_back(IdPoint{i, Point(std::move(c))});
    }
    return pts;
}

std::string save_blob(const SannSketch& sketch) {
    std::ostringstream out;
    sketch.save(out);
    return out.str();
}

}  // namespace

TEST_CASE("derive_params arithmetic") {
    DerivedParams d = derive_params(10000, 0.5, 0.25);
    CHECK(d.rho == doctest::Approx(0.5));
    CHECK(d.k == 7);  // ceil(ln 10000 / ln 4)
    CHECK(d.tables == 200);  // ceil(10000^0.5 / 0.5)
    CHECK_THROWS_AS(derive_params(1, 0.5, 0.25), ParameterError);
    CHECK_THROWS_AS(derive_params(100, 0.25, 0.5), ParameterError);
    CHECK_THROWS_AS(derive_params(100, 0.5, 0.5), ParameterError);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(SannSketch(make_cfg(1, 0.5, 1)), ParameterError);
    auto bad_eta = make_cfg(100, 1.5, 1);
    CHECK_THROWS_AS(SannSketch{bad_eta}, ParameterError);
    auto neg_eta = make_cfg(100, -0.1, 1);
    CHECK_THROWS_AS(SannSketch{neg_eta}, ParameterError);
    auto bad_c = make_cfg(100, 0.5, 1);
    bad_c.c = 1.0;
    CHECK_THROWS_AS(SannSketch{bad_c}, ParameterError);
    auto bad_dim = make_cfg(100, 0.5, 1, 0);
    CHECK_THROWS_AS(SannSketch{bad_dim}, ParameterError);
    auto overflow = make_cfg(100, 0.5, 1);
    overflow.k = 10;  // 100^10 does not fit in 64 bits
    CHECK_THROWS_AS(SannSketch{overflow}, ParameterError);
    auto srp_deep = make_cfg(100, 0.5, 1);
    srp_deep.base.kind = FamilyKind::srp;
    srp_deep.k = 63;
    CHECK_THROWS_AS(SannSketch{srp_deep}, ParameterError);
    // Boundary sampling exponents are legal.
    CHECK_NOTHROW(SannSketch(make_cfg(100, 0.0, 1)));
    CHECK_NOTHROW(SannSketch(make_cfg(100, 1.0, 1)));
}

TEST_CASE("derived table parameters land in the config") {
    SannSketch sketch(make_cfg(1000, 0.5, 3));
    CHECK(sketch.config().k == 5);
    CHECK(sketch.config().tables == 64);
    CHECK(sketch.rho() == doctest::Approx(0.5));
    CHECK(sketch.sample_rate() ==
          doctest::Approx(std::pow(1000.0, -0.5)));

    auto pinned = make_cfg(1000, 0.5, 3);
    pinned.k = 3;
    pinned.tables = 10;
    SannSketch sketch2(pinned);
    CHECK(sketch2.config().k == 3);
    CHECK(sketch2.config().tables == 10);
}

TEST_CASE("eta zero stores everything, eta one almost nothing") {
    auto pts = random_points(400, 4, 10);
    SannSketch all(make_cfg(400, 0.0, 11));
    for (const auto& ip : pts) CHECK(all.insert(ip.id, ip.point));
    CHECK(all.stored_count() == 400);
    CHECK(all.seen_count() == 400);

    SannSketch few(make_cfg(400, 1.0, 11));
    for (const auto& ip : pts) few.insert(ip.id, ip.point);
    CHECK(few.seen_count() == 400);
    // Retention rate 1/400: a handful at most.
    CHECK(few.stored_count() <= 8);
}

TEST_CASE("retention concentrates around n^(1-eta)") {
    auto pts = random_points(10000, 4, 20);
    SannSketch sketch(make_cfg(10000, 0.5, 21));
    for (const auto& ip : pts) sketch.insert(ip.id, ip.point);
    // Binomial(10000, 0.01): mean 100, sigma just under 10.
    CHECK(sketch.stored_count() >= 70);
    CHECK(sketch.stored_count() <= 130);
}

TEST_CASE("insert rejects overflow, bad dims, and retained duplicates") {
    SannSketch sketch(make_cfg(2, 0.0, 5));
    CHECK(sketch.insert(1, Point{1.0f, 0.0f, 0.0f, 0.0f}));
    CHECK_THROWS_AS(sketch.insert(2, Point{1.0f, 0.0f}), ShapeError);
    CHECK_THROWS_AS(sketch.insert(1, Point{0.0f, 1.0f, 0.0f, 0.0f}),
                    DuplicateError);
    CHECK(sketch.insert(2, Point{0.0f, 1.0f, 0.0f, 0.0f}));
    CHECK_THROWS_AS(sketch.insert(3, Point{0.0f, 0.0f, 1.0f, 0.0f}),
                    ParameterError);
}

TEST_CASE("query returns an exact hit when the query is stored") {
    auto pts = random_points(200, 4, 30);
    SannSketch sketch(make_cfg(200, 0.0, 31));
    for (const auto& ip : pts) sketch.insert(ip.id, ip.point);
    for (std::uint64_t id : {std::uint64_t{0}, std::uint64_t{37},
                             std::uint64_t{199}}) {
        QueryOutcome out = sketch.query(pts[id].point);
        REQUIRE(out.result.has_value());
        CHECK(out.result->id == id);
        CHECK(out.result->distance == doctest::Approx(0.0));
        CHECK(out.candidates_examined > 0);
    }
    CHECK_THROWS_AS(sketch.query(Point{1.0f}), ShapeError);
}

TEST_CASE("bucket scan appends whole buckets and stops at the cap") {
    // Every point identical: each table has one bucket holding all of them,
    // so the scan exhausts the first bucket (100 entries) and stops there
    // because 100 >= 3L = 6.
    auto cfg = make_cfg(100, 0.0, 40);
    cfg.k = 2;
    cfg.tables = 2;
    SannSketch sketch(cfg);
    Point x{0.5f, 0.5f, 0.5f, 0.5f};
    for (std::uint64_t id = 0; id < 100; ++id) sketch.insert(id, x);
    QueryOutcome out = sketch.query(x);
    CHECK(out.candidates_examined == 100);
    REQUIRE(out.result.has_value());
    CHECK(out.result->id == 0);  // tie broken toward the smallest id
    CHECK(out.result->distance == doctest::Approx(0.0));
}

TEST_CASE("results beyond c*r are suppressed") {
    auto cfg = make_cfg(10, 0.0, 50, 2);
    cfg.r = 0.1;
    cfg.c = 2.0;
    cfg.base.width = 0.1;
    SannSketch sketch(cfg);
    sketch.insert(1, Point{0.0f, 0.0f});
    // Hash-identical query point at distance > c*r cannot happen with a
    // fine width, but a far point in the same bucket can only be returned
    // if it sits within c*r; query the stored point itself shifted by more
    // than c*r along one axis and accept either a miss or a valid hit.
    QueryOutcome out = sketch.query(Point{5.0f, 0.0f});
    if (out.result.has_value())
        CHECK(out.result->distance <= cfg.c * cfg.r);
}

TEST_CASE("candidate reporting matches the returned answer") {
    auto pts = random_points(300, 4, 60);
    SannSketch sketch(make_cfg(300, 0.0, 61));
    for (const auto& ip : pts) sketch.insert(ip.id, ip.point);
    std::vector<std::uint64_t> cands;
    QueryOutcome out = sketch.query(pts[12].point, &cands);
    REQUIRE(out.result.has_value());
    CHECK(!cands.empty());
    CHECK(cands.size() <= out.candidates_examined);
    bool found = false;
    for (auto id : cands)
        if (id == out.result->id) found = true;
    CHECK(found);
    // Deduplicated and sorted ids.
    for (std::size_t i = 1; i < cands.size(); ++i)
        CHECK(cands[i - 1] < cands[i]);
}

TEST_CASE("erase and restore invert each other") {
    auto pts = random_points(2000, 4, 70);
    SannSketch sketch(make_cfg(2000, 0.3, 71));
    for (const auto& ip : pts) sketch.insert(ip.id, ip.point);
    auto retained = sketch.retained();
    REQUIRE(!retained.empty());
    std::uint64_t victim = retained[retained.size() / 2].id;
    Point coords = retained[retained.size() / 2].point;

    std::string before = save_blob(sketch);
    QueryOutcome hit = sketch.query(coords);
    REQUIRE(hit.result.has_value());
    CHECK(hit.result->id == victim);

    CHECK(sketch.erase(victim));
    CHECK(!sketch.erase(victim));
    CHECK(sketch.stored_count() == retained.size() - 1);
    QueryOutcome gone = sketch.query(coords);
    if (gone.result.has_value()) CHECK(gone.result->id != victim);

    sketch.restore(victim, coords);
    CHECK(sketch.stored_count() == retained.size());
    CHECK(save_blob(sketch) == before);
    CHECK_THROWS_AS(sketch.restore(victim, coords), DuplicateError);

    // Unknown ids are a no-op.
    CHECK(!sketch.erase(999999));
}

TEST_CASE("retained ids appear in their buckets in every table") {
    auto pts = random_points(50, 4, 80);
    SannSketch sketch(make_cfg(50, 0.0, 81));
    for (const auto& ip : pts) sketch.insert(ip.id, ip.point);
    const auto& cfg = sketch.config();
    for (std::uint64_t id : {std::uint64_t{3}, std::uint64_t{44}}) {
        for (std::size_t j = 0; j < cfg.tables; ++j) {
            auto bucket =
                sketch.bucket_contents(j, sketch.table_hash(j, pts[id].point));
            bool found = false;
            for (auto got : bucket)
                if (got == id) found = true;
            CHECK(found);
        }
    }
}

TEST_CASE("query_batch equals element-wise queries") {
    auto pts = random_points(500, 4, 90);
    SannSketch sketch(make_cfg(500, 0.2, 91));
    for (const auto& ip : pts) sketch.insert(ip.id, ip.point);
    Rng rng(92);
    std::vector<Point> batch;
    for (int i = 0; i < 64; ++i) {
        std::vector<float> c(4);
        for (float& v : c) v = static_cast<float>(rng.uniform(-1.0, 1.0));
        batch.emplace_back(std::move(c));
    }
    auto out = sketch.query_batch(batch);
    REQUIRE(out.size() == batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i)
        CHECK(out[i] == sketch.query(batch[i]));
    CHECK(sketch.query_batch({}).empty());
    // A bad dimension anywhere rejects the whole batch.
    batch.push_back(Point{1.0f});
    CHECK_THROWS_AS(sketch.query_batch(batch), ShapeError);
}

TEST_CASE("memory report arithmetic") {
    auto pts = random_points(1000, 4, 100);
    SannSketch sketch(make_cfg(1000, 0.4, 101));
    for (const auto& ip : pts) sketch.insert(ip.id, ip.point);
    MemoryReport rep = sketch.memory_report();
    std::uint64_t stored = sketch.stored_count();
    CHECK(rep.points_stored == stored);
    CHECK(rep.bucket_entries == stored * sketch.config().tables);
    CHECK(rep.bytes_estimate ==
          stored * 4 * 4 + (rep.bucket_entries + stored) * 8);
}

TEST_CASE("save and load round trip bit-identically and stay in sync") {
    auto pts = random_points(1000, 4, 110);
    SannSketch original(make_cfg(1000, 0.3, 111));
    for (std::size_t i = 0; i < 600; ++i)
        original.insert(pts[i].id, pts[i].point);

    std::string blob = save_blob(original);
    std::istringstream in(blob);
    SannSketch loaded = SannSketch::load(in);
    CHECK(save_blob(loaded) == blob);
    CHECK(loaded.stored_count() == original.stored_count());
    CHECK(loaded.seen_count() == original.seen_count());

    // Future inserts draw the same sampling decisions.
    for (std::size_t i = 600; i < 1000; ++i) {
        bool a = original.insert(pts[i].id, pts[i].point);
        bool b = loaded.insert(pts[i].id, pts[i].point);
        CHECK(a == b);
    }
    CHECK(save_blob(loaded) == save_blob(original));

    // Queries agree afterwards.
    Rng rng(112);
    for (int i = 0; i < 32; ++i) {
        std::vector<float> c(4);
        for (float& v : c) v = static_cast<float>(rng.uniform(-1.0, 1.0));
        Point q(std::move(c));
        CHECK(original.query(q) == loaded.query(q));
    }
}

TEST_CASE("load rejects corrupted blobs") {
    SannSketch sketch(make_cfg(100, 0.5, 120));
    std::string blob = save_blob(sketch);
    std::string truncated = blob.substr(0, blob.size() / 2);
    std::istringstream in(truncated);
    CHECK_THROWS_AS(SannSketch::load(in), FormatError);
    std::string wrong_magic = blob;
    wrong_magic[0] = 'X';
    std::istringstream in2(wrong_magic);
    CHECK_THROWS_AS(SannSketch::load(in2), FormatError);
}
