#include "streamsketch/bench/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "streamsketch/errors.hpp"

namespace streamsketch::bench {

using nlohmann::json;

namespace {

constexpr const char* kNames[] = {
    "ann-compare", "ann-scaling",    "ann-qps",        "kde-sketch-size",
    "kde-window",  "kde-vs-counter", "gen-synthetic",
};

}  // namespace

const char* experiment_name(ExperimentKind kind) {
    return kNames[static_cast<int>(kind)];
}

ExperimentKind experiment_from_name(const std::string& name) {
    for (int i = 0; i < 7; ++i)
        if (name == kNames[i]) return static_cast<ExperimentKind>(i);
    throw ConfigError("unknown experiment: " + name);
}

ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    switch (kind) {
        case ExperimentKind::ann_compare:
            cfg.family = "p-stable";
            break;
        case ExperimentKind::ann_scaling:
            cfg.family = "p-stable";
            cfg.eta_grid = {0.2, 0.8};
            cfg.epsilon_grid = {0.5};
            cfg.query_count = 100;
            break;
        case ExperimentKind::ann_qps:
            cfg.family = "p-stable";
            cfg.store_count = 10000;
            cfg.query_count = 100;
            cfg.tables_override = 64;
            cfg.jl_dim = 16;
            break;
        case ExperimentKind::kde_sketch_size:
            cfg.family = "srp";
            cfg.dataset.kind = "gaussian-mixture";
            cfg.dataset.dim = 200;
            cfg.query_count = 1000;
            break;
        case ExperimentKind::kde_window:
            cfg.family = "srp";
            cfg.dataset.kind = "gaussian-mixture";
            cfg.dataset.dim = 200;
            cfg.query_count = 1000;
            break;
        case ExperimentKind::kde_vs_counter:
            cfg.family = "srp";
            cfg.dataset.kind = "gaussian-mixture";
            cfg.dataset.dim = 200;
            cfg.query_count = 1000;
            cfg.kde_rows = 100;
            break;
        case ExperimentKind::gen_synthetic:
            break;
    }
    return cfg;
}

namespace {

void read_dataset(const json& j, DatasetSpec& spec) {
    for (const auto& [key, value] : j.items()) {
        if (key == "kind")
            spec.kind = value.get<std::string>();
        else if (key == "path")
            spec.path = value.get<std::string>();
        else if (key == "query_path")
            spec.query_path = value.get<std::string>();
        else if (key == "n")
            spec.n = value.get<std::size_t>();
        else if (key == "dim")
            spec.dim = value.get<std::size_t>();
        else if (key == "side")
            spec.side = value.get<double>();
        else if (key == "components")
            spec.components = value.get<std::size_t>();
        else if (key == "intensity")
            spec.intensity = value.get<double>();
        else
            throw ConfigError("unknown dataset key: " + key);
    }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    if (!j.contains("experiment"))
        throw ConfigError("config lacks the experiment key");
    ExperimentConfig cfg =
        default_config(experiment_from_name(j["experiment"].get<std::string>()));
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "experiment") {
                continue;
            } else if (key == "dataset") {
                read_dataset(value, cfg.dataset);
            } else if (key == "eta") {
                cfg.eta_grid = value.get<std::vector<double>>();
            } else if (key == "epsilon") {
                cfg.epsilon_grid = value.get<std::vector<double>>();
            } else if (key == "stream_sizes") {
                cfg.stream_sizes = value.get<std::vector<std::size_t>>();
            } else if (key == "rows") {
                cfg.rows_grid = value.get<std::vector<std::size_t>>();
            } else if (key == "windows") {
                cfg.window_grid = value.get<std::vector<std::uint64_t>>();
            } else if (key == "r") {
                cfg.r = value.get<double>();
            } else if (key == "eps_prime") {
                cfg.eps_prime = value.get<double>();
            } else if (key == "power") {
                cfg.power = value.get<std::uint32_t>();
            } else if (key == "family") {
                cfg.family = value.get<std::string>();
            } else if (key == "width") {
                cfg.width = value.get<double>();
            } else if (key == "range_per_hash") {
                cfg.range_per_hash = value.get<std::uint64_t>();
            } else if (key == "k") {
                cfg.k_override = value.get<std::uint32_t>();
            } else if (key == "tables") {
                cfg.tables_override = value.get<std::size_t>();
            } else if (key == "collision_trials") {
                cfg.collision_trials = value.get<std::size_t>();
            } else if (key == "jl_dim") {
                cfg.jl_dim = value.get<std::size_t>();
            } else if (key == "store_count") {
                cfg.store_count = value.get<std::size_t>();
            } else if (key == "query_count") {
                cfg.query_count = value.get<std::size_t>();
            } else if (key == "window") {
                cfg.window = value.get<std::uint64_t>();
            } else if (key == "kde_rows") {
                cfg.kde_rows = value.get<std::size_t>();
            } else if (key == "seeds") {
                cfg.seeds = value.get<std::vector<std::uint64_t>>();
            } else if (key == "full_scale") {
                cfg.full_scale = value.get<bool>();
            } else if (key == "out") {
                cfg.out_dir = value.get<std::string>();
            } else {
                throw ConfigError("unknown config key: " + key);
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    if (cfg.full_scale) apply_full_scale(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

void apply_full_scale(ExperimentConfig& cfg) {
    cfg.full_scale = true;
    switch (cfg.kind) {
        case ExperimentKind::ann_compare:
        case ExperimentKind::ann_scaling:
            cfg.store_count = 50000;
            cfg.query_count = 5000;
            if (cfg.dataset.kind != "fvecs" && cfg.dataset.kind != "csv")
                cfg.dataset.n = std::max<std::size_t>(cfg.dataset.n, 50000);
            break;
        case ExperimentKind::ann_qps:
            cfg.store_count = 50000;
            cfg.query_count = 1000;
            if (cfg.dataset.kind != "fvecs" && cfg.dataset.kind != "csv")
                cfg.dataset.n = std::max<std::size_t>(cfg.dataset.n, 50000);
            break;
        case ExperimentKind::kde_sketch_size:
            cfg.rows_grid = {100, 200, 400, 800, 1600, 3200};
            break;
        case ExperimentKind::kde_window:
        case ExperimentKind::kde_vs_counter:
        case ExperimentKind::gen_synthetic:
            break;
    }
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = experiment_name(cfg.kind);
    json d;
    d["kind"] = cfg.dataset.kind;
    if (!cfg.dataset.path.empty()) d["path"] = cfg.dataset.path;
    if (!cfg.dataset.query_path.empty()) d["query_path"] = cfg.dataset.query_path;
    d["n"] = cfg.dataset.n;
    d["dim"] = cfg.dataset.dim;
    d["side"] = cfg.dataset.side;
    d["components"] = cfg.dataset.components;
    d["intensity"] = cfg.dataset.intensity;
    j["dataset"] = d;
    j["eta"] = cfg.eta_grid;
    j["epsilon"] = cfg.epsilon_grid;
    j["stream_sizes"] = cfg.stream_sizes;
    j["rows"] = cfg.rows_grid;
    j["windows"] = cfg.window_grid;
    j["r"] = cfg.r;
    j["eps_prime"] = cfg.eps_prime;
    j["power"] = cfg.power;
    j["family"] = cfg.family;
    j["width"] = cfg.width;
    j["range_per_hash"] = cfg.range_per_hash;
    j["k"] = cfg.k_override;
    j["tables"] = cfg.tables_override;
    j["collision_trials"] = cfg.collision_trials;
    j["jl_dim"] = cfg.jl_dim;
    j["store_count"] = cfg.store_count;
    j["query_count"] = cfg.query_count;
    j["window"] = cfg.window;
    j["kde_rows"] = cfg.kde_rows;
    j["seeds"] = cfg.seeds;
    j["full_scale"] = cfg.full_scale;
    j["out"] = cfg.out_dir;
    return j.dump(2) + "\n";
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.seeds.empty()) throw ConfigError("seeds grid is empty");
    if (cfg.eta_grid.empty()) throw ConfigError("eta grid is empty");
    if (cfg.epsilon_grid.empty()) throw ConfigError("epsilon grid is empty");
    if (cfg.rows_grid.empty()) throw ConfigError("rows grid is empty");
    if (cfg.window_grid.empty()) throw ConfigError("windows grid is empty");
    if (cfg.stream_sizes.empty()) throw ConfigError("stream_sizes grid is empty");
    if (!(cfg.r > 0.0)) throw ConfigError("r must be > 0");
    if (!(cfg.eps_prime > 0.0) || !(cfg.eps_prime <= 1.0))
        throw ConfigError("eps_prime must be in (0, 1]");
    if (cfg.power < 1) throw ConfigError("power must be >= 1");
    for (double eta : cfg.eta_grid)
        if (!(eta >= 0.0) || !(eta <= 1.0))
            throw ConfigError("eta values must lie in [0, 1]");
    for (double eps : cfg.epsilon_grid)
        if (!(eps > 0.0)) throw ConfigError("epsilon values must be > 0");
    if (cfg.family != "srp" && cfg.family != "p-stable" && !cfg.family.empty())
        throw ConfigError("family must be srp or p-stable");
    const std::string& kind = cfg.dataset.kind;
    if (kind != "fvecs" && kind != "csv" && kind != "synthetic-uniform" &&
        kind != "gaussian-mixture" && kind != "poisson")
        throw ConfigError("unknown dataset kind: " + kind);
    if (kind == "fvecs" || kind == "csv") {
        if (cfg.dataset.path.empty())
            throw ConfigError("file dataset needs a path");
        if (!std::filesystem::exists(cfg.dataset.path))
            throw ConfigError(cfg.dataset.path + ": dataset file does not exist");
        if (!cfg.dataset.query_path.empty() &&
            !std::filesystem::exists(cfg.dataset.query_path))
            throw ConfigError(cfg.dataset.query_path +
                              ": query file does not exist");
    }
    if (cfg.dataset.n < 2) throw ConfigError("dataset n must be >= 2");
    if (cfg.dataset.dim < 1) throw ConfigError("dataset dim must be >= 1");
}

}  // namespace streamsketch::bench
