#include "streamsketch/bench/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "streamsketch/errors.hpp"
#include "streamsketch/io.hpp"
#include "streamsketch/oracle.hpp"
#include "streamsketch/rng.hpp"
#include "streamsketch/sann.hpp"
#include "streamsketch/swakde.hpp"

namespace streamsketch::bench {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

/// Re-raises the in-flight library error with the grid cell prepended,
/// keeping its category so exit codes stay meaningful.
[[noreturn]] void rethrow_in_context(const std::string& cell) {
    try {
        throw;
    } catch (const ConfigError& e) {
        throw ConfigError(cell + ": " + e.what());
    } catch (const FormatError& e) {
        throw FormatError(cell + ": " + e.what());
    } catch (const ParameterError& e) {
        throw ParameterError(cell + ": " + e.what());
    } catch (const Error& e) {
        throw Error(cell + ": " + e.what());
    }
}

BaseHashSpec base_spec(const ExperimentConfig& cfg) {
    BaseHashSpec spec;
    if (cfg.family == "srp") {
        spec.kind = FamilyKind::srp;
    } else if (cfg.family == "p-stable" || cfg.family.empty()) {
        spec.kind = FamilyKind::p_stable;
    } else {
        throw ConfigError("unknown hash family '" + cfg.family + "'");
    }
    spec.width = cfg.width == 0.0 ? cfg.r : cfg.width;
    spec.range_per_hash = cfg.range_per_hash;
    return spec;
}

struct CollisionRates {
    double p1 = 0.0;
    double p2 = 0.0;
};

/// Monte Carlo base-hash collision probabilities at radii r and c*r.
CollisionRates measure_rates(const ExperimentConfig& cfg,
                             const BaseHashSpec& base, double c,
                             std::size_t dim, std::uint64_t seed) {
    CollisionRates rates;
    rates.p1 = estimate_collision_prob(base, cfg.r, dim, cfg.collision_trials,
                                       derive_seed(seed, 101));
    rates.p2 = estimate_collision_prob(base, c * cfg.r, dim,
                                       cfg.collision_trials,
                                       derive_seed(seed, 102));
    return rates;
}

SannSketch build_sann(const Dataset& data, const ExperimentConfig& cfg,
                      const BaseHashSpec& base, double eta, double c,
                      const CollisionRates& rates, std::uint64_t seed) {
    SannConfig scfg;
    scfg.n = data.points.size();
    scfg.eta = eta;
    scfg.r = cfg.r;
    scfg.c = c;
    scfg.p1 = rates.p1;
    scfg.p2 = rates.p2;
    scfg.k = cfg.k_override;
    scfg.tables = cfg.tables_override;
    scfg.dim = data.points.empty() ? cfg.dataset.dim
                                   : data.points.front().point.dim();
    scfg.base = base;
    scfg.seed = derive_seed(seed, 1);
    SannSketch sketch(scfg);
    for (const IdPoint& ip : data.points) sketch.insert(ip.id, ip.point);
    return sketch;
}

void consume(std::uint64_t v) {
    volatile std::uint64_t sink = v;
    (void)sink;
}

/// Timed full pass over the query set after 10 untimed warm-up queries.
template <typename QueryFn>
double measure_qps(const std::vector<Point>& queries, QueryFn&& fn) {
    if (queries.empty()) throw ConfigError("qps needs a nonempty query set");
    std::size_t warm = std::min<std::size_t>(10, queries.size());
    std::uint64_t sink = 0;
    for (std::size_t i = 0; i < warm; ++i) sink += fn(queries[i]);
    StopWatch timer;
    for (const Point& q : queries) sink += fn(q);
    double sec = timer.seconds();
    consume(sink);
    if (sec <= 0.0) sec = 1e-9;
    return static_cast<double>(queries.size()) / sec;
}

std::vector<std::optional<std::uint64_t>> sann_answers(
    const SannSketch& sketch, const std::vector<Point>& queries) {
    std::vector<std::optional<std::uint64_t>> out;
    out.reserve(queries.size());
    for (const Point& q : queries) {
        QueryOutcome o = sketch.query(q);
        out.push_back(o.result ? std::optional<std::uint64_t>(o.result->id)
                               : std::nullopt);
    }
    return out;
}

std::vector<std::optional<std::uint64_t>> jl_answers(
    const JlIndex& jl, const std::vector<Point>& queries) {
    std::vector<std::optional<std::uint64_t>> out;
    out.reserve(queries.size());
    for (const Point& q : queries) {
        auto nb = jl.query(q);
        out.push_back(nb ? std::optional<std::uint64_t>(nb->id) : std::nullopt);
    }
    return out;
}

std::size_t matched_jl_dim(const ExperimentConfig& cfg, std::size_t dim,
                           double sann_compression) {
    if (cfg.jl_dim != 0) return std::min(cfg.jl_dim, dim);
    double matched = std::round(static_cast<double>(dim) * sann_compression);
    return static_cast<std::size_t>(
        std::clamp(matched, 1.0, static_cast<double>(dim)));
}

void run_ann_compare(const ExperimentConfig& cfg, ResultWriter& w) {
    for (std::uint64_t seed : cfg.seeds) {
        Dataset data = load_dataset(cfg, cfg.store_count, cfg.query_count, seed);
        std::vector<std::vector<Neighbor>> nn50(data.queries.size());
        for (std::size_t i = 0; i < data.queries.size(); ++i)
            nn50[i] = exact_knn(data.points, data.queries[i],
                                std::min<std::size_t>(50, data.points.size()));
        BaseHashSpec base = base_spec(cfg);
        for (double eta : cfg.eta_grid) {
            for (double epsilon : cfg.epsilon_grid) {
                std::string cell = "eta=" + num(eta) + ";epsilon=" + num(epsilon);
                try {
                    StopWatch cell_timer;
                    double c = 1.0 + epsilon;
                    CollisionRates rates =
                        measure_rates(cfg, base, c, data.queries.empty()
                                                        ? cfg.dataset.dim
                                                        : data.queries[0].dim(),
                                      seed);
                    SannSketch sketch =
                        build_sann(data, cfg, base, eta, c, rates, seed);

                    double recall_sum = 0.0;
                    std::vector<std::uint64_t> cands;
                    for (std::size_t i = 0; i < data.queries.size(); ++i) {
                        sketch.query(data.queries[i], &cands);
                        recall_sum += recall_fraction(cands, nn50[i]);
                    }
                    double recall =
                        recall_sum / static_cast<double>(data.queries.size());
                    double accuracy = crann_accuracy(
                        data.queries, sann_answers(sketch, data.queries),
                        data.points, cfg.r, c);
                    MemoryReport mem = sketch.memory_report();
                    double raw_bytes = static_cast<double>(data.points.size()) *
                                       static_cast<double>(sketch.config().dim) *
                                       4.0;
                    double compression =
                        static_cast<double>(mem.bytes_estimate) / raw_bytes;
                    double qps =
                        measure_qps(data.queries, [&](const Point& q) {
                            return sketch.query(q).candidates_examined;
                        });

                    double rt = cell_timer.seconds();
                    std::string ps = cell + ";algo=sann";
                    const char* exp = experiment_name(cfg.kind);
                    w.add(exp, data.name, ps, "recall50", recall, rt, seed);
                    w.add(exp, data.name, ps, "crann_accuracy", accuracy, rt, seed);
                    w.add(exp, data.name, ps, "compression", compression, rt, seed);
                    w.add(exp, data.name, ps, "qps", qps, rt, seed);
                    w.add(exp, data.name, ps, "bytes",
                          static_cast<double>(mem.bytes_estimate), rt, seed);
                    w.add(exp, data.name, ps, "points_stored",
                          static_cast<double>(mem.points_stored), rt, seed);

                    StopWatch jl_timer;
                    std::size_t dim = sketch.config().dim;
                    std::size_t k_jl = matched_jl_dim(cfg, dim, compression);
                    JlIndex jl(data.points, k_jl, derive_seed(seed, 2));
                    double jl_recall_sum = 0.0;
                    for (std::size_t i = 0; i < data.queries.size(); ++i) {
                        auto topk = jl.query_topk(data.queries[i],
                                                  nn50[i].size());
                        jl_recall_sum += recall_fraction(topk, nn50[i]);
                    }
                    double jl_recall = jl_recall_sum /
                                       static_cast<double>(data.queries.size());
                    double jl_accuracy =
                        crann_accuracy(data.queries, jl_answers(jl, data.queries),
                                       data.points, cfg.r, c);
                    double jl_qps =
                        measure_qps(data.queries, [&](const Point& q) {
                            auto nb = jl.query(q);
                            return nb ? nb->id : 0;
                        });
                    double jl_rt = jl_timer.seconds();
                    std::string pj = cell + ";algo=jl";
                    w.add(exp, data.name, pj, "recall50", jl_recall, jl_rt, seed);
                    w.add(exp, data.name, pj, "crann_accuracy", jl_accuracy,
                          jl_rt, seed);
                    w.add(exp, data.name, pj, "compression", jl.compression(),
                          jl_rt, seed);
                    w.add(exp, data.name, pj, "qps", jl_qps, jl_rt, seed);
                    w.add(exp, data.name, pj, "bytes",
                          static_cast<double>(jl.bytes_estimate()), jl_rt, seed);
                } catch (...) {
                    rethrow_in_context(cell);
                }
            }
        }
    }
}

void run_ann_scaling(const ExperimentConfig& cfg, ResultWriter& w) {
    if (cfg.stream_sizes.empty()) throw ConfigError("stream_sizes is empty");
    std::size_t n_max =
        *std::max_element(cfg.stream_sizes.begin(), cfg.stream_sizes.end());
    double epsilon = cfg.epsilon_grid.front();
    double c = 1.0 + epsilon;
    BaseHashSpec base = base_spec(cfg);
    for (std::uint64_t seed : cfg.seeds) {
        Dataset data = load_dataset(cfg, n_max, 0, seed);
        CollisionRates rates =
            measure_rates(cfg, base, c, cfg.dataset.dim, seed);
        for (double eta : cfg.eta_grid) {
            for (std::size_t n : cfg.stream_sizes) {
                std::string cell = "eta=" + num(eta) + ";epsilon=" +
                                   num(epsilon) + ";n=" + num(static_cast<double>(n));
                try {
                    StopWatch cell_timer;
                    Dataset slice;
                    slice.name = data.name;
                    slice.points.assign(
                        data.points.begin(),
                        data.points.begin() +
                            static_cast<std::ptrdiff_t>(
                                std::min(n, data.points.size())));
                    SannSketch sketch =
                        build_sann(slice, cfg, base, eta, c, rates, seed);
                    MemoryReport mem = sketch.memory_report();
                    double raw_bytes =
                        static_cast<double>(slice.points.size()) *
                        static_cast<double>(sketch.config().dim) * 4.0;
                    double rt = cell_timer.seconds();
                    const char* exp = experiment_name(cfg.kind);
                    w.add(exp, data.name, cell, "bytes",
                          static_cast<double>(mem.bytes_estimate), rt, seed);
                    w.add(exp, data.name, cell, "points_stored",
                          static_cast<double>(mem.points_stored), rt, seed);
                    w.add(exp, data.name, cell, "compression",
                          static_cast<double>(mem.bytes_estimate) / raw_bytes,
                          rt, seed);
                } catch (...) {
                    rethrow_in_context(cell);
                }
            }
        }
    }
}

void run_ann_qps(const ExperimentConfig& cfg, ResultWriter& w) {
    double eta = cfg.eta_grid.front();
    double epsilon = cfg.epsilon_grid.front();
    double c = 1.0 + epsilon;
    BaseHashSpec base = base_spec(cfg);
    for (std::uint64_t seed : cfg.seeds) {
        std::string cell = "eta=" + num(eta) + ";epsilon=" + num(epsilon);
        try {
            StopWatch cell_timer;
            Dataset data =
                load_dataset(cfg, cfg.store_count, cfg.query_count, seed);
            std::size_t dim = data.points.empty()
                                  ? cfg.dataset.dim
                                  : data.points.front().point.dim();
            CollisionRates rates = measure_rates(cfg, base, c, dim, seed);
            SannSketch sketch = build_sann(data, cfg, base, eta, c, rates, seed);
            MemoryReport mem = sketch.memory_report();
            double compression =
                static_cast<double>(mem.bytes_estimate) /
                (static_cast<double>(data.points.size()) *
                 static_cast<double>(dim) * 4.0);
            std::size_t k_jl = matched_jl_dim(cfg, dim, compression);
            JlIndex jl(data.points, k_jl, derive_seed(seed, 2));

            double qps_sann = measure_qps(data.queries, [&](const Point& q) {
                return sketch.query(q).candidates_examined;
            });
            double qps_jl = measure_qps(data.queries, [&](const Point& q) {
                auto nb = jl.query(q);
                return nb ? nb->id : 0;
            });

            double acc_sann =
                crann_accuracy(data.queries, sann_answers(sketch, data.queries),
                               data.points, cfg.r, c);
            double acc_jl =
                crann_accuracy(data.queries, jl_answers(jl, data.queries),
                               data.points, cfg.r, c);

            double rt = cell_timer.seconds();
            const char* exp = experiment_name(cfg.kind);
            w.add(exp, data.name, cell + ";algo=sann", "qps", qps_sann, rt, seed);
            w.add(exp, data.name, cell + ";algo=jl", "qps", qps_jl, rt, seed);
            w.add(exp, data.name, cell + ";algo=sann", "crann_accuracy",
                  acc_sann, rt, seed);
            w.add(exp, data.name, cell + ";algo=jl", "crann_accuracy", acc_jl,
                  rt, seed);
            w.add(exp, data.name, cell + ";algo=sann", "bytes",
                  static_cast<double>(mem.bytes_estimate), rt, seed);
            w.add(exp, data.name, cell + ";algo=jl", "bytes",
                  static_cast<double>(jl.bytes_estimate()), rt, seed);
        } catch (...) {
            rethrow_in_context(cell);
        }
    }
}

struct KdeCellResult {
    double mean_rel_exact = 0.0;
    double mean_log10_exact = 0.0;
    double mean_rel_twin = 0.0;
    double max_rel_twin = 0.0;
    std::uint64_t row_violations = 0;
    std::uint64_t agg_violations = 0;
    std::uint64_t zero_kde_queries = 0;
    std::uint64_t zero_twin_queries = 0;
    SpaceReport space;
};

/// Streams the dataset through a grid and its exact-counter twin, then
/// grades every query against the twin (and, when asked, against the exact
/// windowed kernel sum). Zero-denominator queries are excluded and counted.
KdeCellResult run_kde_cell(const Dataset& data, const BaseHashSpec& base,
                           std::size_t rows, std::uint64_t window,
                           double eps_prime, std::uint32_t power,
                           std::uint64_t seed, bool need_exact) {
    RaceConfig rc;
    rc.rows = rows;
    rc.dim = data.points.empty() ? 1 : data.points.front().point.dim();
    rc.base = base;
    rc.power = power;
    rc.window = window;
    rc.eps_prime = eps_prime;
    rc.seed = derive_seed(derive_seed(seed, rows), window);
    RaceGrid grid(rc);
    CounterRace twin(rc);
    for (const IdPoint& ip : data.points) {
        grid.update(ip.point);
        twin.update(ip.point);
    }

    std::vector<Point> in_window;
    if (need_exact) {
        std::size_t n = data.points.size();
        std::size_t scope = std::min<std::size_t>(window - 1, n);
        in_window.reserve(scope);
        for (std::size_t i = n - scope; i < n; ++i)
            in_window.push_back(data.points[i].point);
    }

    KdeCellResult out;
    out.max_rel_twin = 0.0;
    std::size_t exact_used = 0;
    std::size_t twin_used = 0;
    const double slack = 1e-9;
    for (const Point& q : data.queries) {
        KdeEstimate est = grid.query(q);
        CounterRace::RowCounts counts = twin.query(q);

        for (std::size_t i = 0; i < rows; ++i) {
            double x = static_cast<double>(counts.per_row[i]);
            double y = est.per_row[i];
            if (std::abs(y - x) > eps_prime * x + slack) ++out.row_violations;
        }
        if (counts.mean > 0.0) {
            double rel = std::abs(est.value - counts.mean) / counts.mean;
            out.mean_rel_twin += rel;
            out.max_rel_twin = std::max(out.max_rel_twin, rel);
            if (std::abs(est.value - counts.mean) >
                eps_prime * counts.mean + slack)
                ++out.agg_violations;
            ++twin_used;
        } else {
            ++out.zero_twin_queries;
            if (est.value != 0.0) ++out.agg_violations;
        }

        if (need_exact) {
            double k = exact_kde(in_window, q, base, power);
            if (k > 0.0) {
                double rel = std::abs(est.value - k) / k;
                out.mean_rel_exact += rel;
                out.mean_log10_exact += std::log10(std::max(rel, 1e-12));
                ++exact_used;
            } else {
                ++out.zero_kde_queries;
            }
        }
    }
    if (twin_used > 0)
        out.mean_rel_twin /= static_cast<double>(twin_used);
    if (exact_used > 0) {
        out.mean_rel_exact /= static_cast<double>(exact_used);
        out.mean_log10_exact /= static_cast<double>(exact_used);
    }
    out.space = grid.space_report();
    return out;
}

void emit_kde_rows(ResultWriter& w, const ExperimentConfig& cfg,
                   const std::string& dataset, const std::string& cell,
                   const KdeCellResult& res, bool need_exact, double rt,
                   std::uint64_t seed) {
    const char* exp = experiment_name(cfg.kind);
    if (need_exact) {
        w.add(exp, dataset, cell, "mean_rel_err_exact", res.mean_rel_exact, rt,
              seed);
        w.add(exp, dataset, cell, "mean_log10_rel_err_exact",
              res.mean_log10_exact, rt, seed);
        w.add(exp, dataset, cell, "zero_kde_queries",
              static_cast<double>(res.zero_kde_queries), rt, seed);
    }
    w.add(exp, dataset, cell, "mean_rel_err_twin", res.mean_rel_twin, rt, seed);
    w.add(exp, dataset, cell, "max_rel_err_twin", res.max_rel_twin, rt, seed);
    w.add(exp, dataset, cell, "row_violations",
          static_cast<double>(res.row_violations), rt, seed);
    w.add(exp, dataset, cell, "agg_violations",
          static_cast<double>(res.agg_violations), rt, seed);
    w.add(exp, dataset, cell, "zero_twin_queries",
          static_cast<double>(res.zero_twin_queries), rt, seed);
    w.add(exp, dataset, cell, "cells_allocated",
          static_cast<double>(res.space.cells_allocated), rt, seed);
    w.add(exp, dataset, cell, "eh_buckets",
          static_cast<double>(res.space.total_eh_buckets), rt, seed);
}

void run_kde_grid(const ExperimentConfig& cfg, ResultWriter& w,
                  const std::vector<std::pair<std::size_t, std::uint64_t>>& cells,
                  bool need_exact) {
    BaseHashSpec base = base_spec(cfg);
    for (std::uint64_t seed : cfg.seeds) {
        Dataset data =
            load_dataset(cfg, cfg.dataset.n, cfg.query_count, seed);
        for (auto [rows, window] : cells) {
            std::string cell = "rows=" + num(static_cast<double>(rows)) +
                               ";window=" + num(static_cast<double>(window));
            try {
                StopWatch cell_timer;
                KdeCellResult res =
                    run_kde_cell(data, base, rows, window, cfg.eps_prime,
                                 cfg.power, seed, need_exact);
                emit_kde_rows(w, cfg, data.name, cell, res, need_exact,
                              cell_timer.seconds(), seed);
            } catch (...) {
                rethrow_in_context(cell);
            }
        }
    }
}

void run_gen_synthetic(const ExperimentConfig& cfg, ResultWriter& w) {
    Dataset data = load_dataset(cfg, cfg.dataset.n, cfg.query_count,
                                cfg.seeds.front());
    std::filesystem::create_directories(cfg.out_dir);
    std::vector<Point> pts;
    pts.reserve(data.points.size());
    for (const IdPoint& ip : data.points) pts.push_back(ip.point);
    std::string points_path = cfg.out_dir + "/points.fvecs";
    std::string queries_path = cfg.out_dir + "/queries.fvecs";
    write_fvecs(points_path, pts);
    write_fvecs(queries_path, data.queries);
    const char* exp = experiment_name(cfg.kind);
    std::string cell = "kind=" + cfg.dataset.kind;
    w.add(exp, data.name, cell, "points_written",
          static_cast<double>(pts.size()), 0.0, cfg.seeds.front());
    w.add(exp, data.name, cell, "queries_written",
          static_cast<double>(data.queries.size()), 0.0, cfg.seeds.front());
}

}  // namespace

Dataset load_dataset(const ExperimentConfig& cfg, std::size_t n_points,
                     std::size_t n_queries, std::uint64_t seed) {
    const DatasetSpec& ds = cfg.dataset;
    Dataset out;
    if (ds.kind == "fvecs" || ds.kind == "csv") {
        if (ds.path.empty())
            throw ConfigError("dataset kind '" + ds.kind + "' needs a path");
        if (ds.query_path.empty())
            throw ConfigError("file datasets need a query_path");
        std::vector<Point> pts =
            ds.kind == "fvecs" ? read_fvecs(ds.path) : read_csv(ds.path);
        std::vector<Point> qs = ds.kind == "fvecs" ? read_fvecs(ds.query_path)
                                                   : read_csv(ds.query_path);
        if (pts.empty())
            throw ConfigError("dataset file '" + ds.path + "' holds no points");
        if (pts.size() > n_points) pts.resize(n_points);
        if (qs.size() > n_queries) qs.resize(n_queries);
        out.points.reserve(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i)
            out.points.push_back(IdPoint{i, std::move(pts[i])});
        out.queries = std::move(qs);
        out.name = std::filesystem::path(ds.path).stem().string();
    } else if (ds.kind == "synthetic-uniform") {
        Rng prng(derive_seed(seed, 7001));
        out.points.reserve(n_points);
        for (std::size_t i = 0; i < n_points; ++i) {
            std::vector<float> c(ds.dim);
            for (float& v : c)
                v = static_cast<float>(prng.uniform(0.0, ds.side));
            out.points.push_back(IdPoint{i, Point(std::move(c))});
        }
        Rng qrng(derive_seed(seed, 7002));
        out.queries.reserve(n_queries);
        for (std::size_t i = 0; i < n_queries; ++i) {
            std::vector<float> c(ds.dim);
            for (float& v : c)
                v = static_cast<float>(qrng.uniform(0.0, ds.side));
            out.queries.emplace_back(std::move(c));
        }
        out.name = "uniform-" + std::to_string(n_points) + "x" +
                   std::to_string(ds.dim);
    } else if (ds.kind == "gaussian-mixture") {
        MixtureStream mix = gen_gaussian_mixture_stream(
            ds.dim, n_points, ds.components, derive_seed(seed, 7003),
            n_queries);
        out.points.reserve(mix.points.size());
        for (std::size_t i = 0; i < mix.points.size(); ++i)
            out.points.push_back(IdPoint{i, std::move(mix.points[i])});
        out.queries = std::move(mix.queries);
        out.name = "mixture-" + std::to_string(n_points) + "x" +
                   std::to_string(ds.dim);
    } else if (ds.kind == "poisson") {
        double volume = std::pow(ds.side, static_cast<double>(ds.dim));
        double intensity = ds.intensity > 0.0
                               ? ds.intensity
                               : static_cast<double>(n_points) / volume;
        LabeledStream ls =
            gen_poisson_stream(ds.dim, intensity, ds.side, cfg.r, n_points,
                               n_queries, derive_seed(seed, 7004));
        out.points = std::move(ls.points);
        out.queries = std::move(ls.queries);
        out.name = "poisson-" + std::to_string(out.points.size()) + "x" +
                   std::to_string(ds.dim);
    } else {
        throw ConfigError("unknown dataset kind '" + ds.kind + "'");
    }
    return out;
}

void run_rows(const ExperimentConfig& cfg, ResultWriter& writer) {
    switch (cfg.kind) {
        case ExperimentKind::ann_compare:
            run_ann_compare(cfg, writer);
            return;
        case ExperimentKind::ann_scaling:
            run_ann_scaling(cfg, writer);
            return;
        case ExperimentKind::ann_qps:
            run_ann_qps(cfg, writer);
            return;
        case ExperimentKind::kde_sketch_size: {
            std::vector<std::pair<std::size_t, std::uint64_t>> cells;
            for (std::size_t rows : cfg.rows_grid)
                cells.emplace_back(rows, cfg.window);
            run_kde_grid(cfg, writer, cells, true);
            return;
        }
        case ExperimentKind::kde_window: {
            std::vector<std::pair<std::size_t, std::uint64_t>> cells;
            for (std::uint64_t window : cfg.window_grid)
                cells.emplace_back(cfg.kde_rows, window);
            run_kde_grid(cfg, writer, cells, true);
            return;
        }
        case ExperimentKind::kde_vs_counter: {
            std::vector<std::pair<std::size_t, std::uint64_t>> cells = {
                {cfg.kde_rows, cfg.window}};
            run_kde_grid(cfg, writer, cells, false);
            return;
        }
        case ExperimentKind::gen_synthetic:
            run_gen_synthetic(cfg, writer);
            return;
    }
    throw ConfigError("unhandled experiment kind");
}

void run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    ResultWriter writer;
    run_rows(cfg, writer);
    writer.write_csv(cfg.out_dir + "/results.csv");
    std::ofstream sidecar(cfg.out_dir + "/config.json");
    if (!sidecar)
        throw FormatError("cannot open '" + cfg.out_dir +
                          "/config.json' for writing");
    sidecar << config_to_json(cfg) << "\n";
}

}  // namespace streamsketch::bench
