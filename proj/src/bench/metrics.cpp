#include "streamsketch/bench/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "streamsketch/errors.hpp"

namespace streamsketch::bench {

void ResultWriter::add(std::string experiment, std::string dataset,
                       std::string params, std::string metric, double value,
                       double runtime_s, std::uint64_t seed) {
    rows_.push_back(ResultRow{std::move(experiment), std::move(dataset),
                              std::move(params), std::move(metric), value,
                              runtime_s, seed});
}

void ResultWriter::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open '" + path + "' for writing");
    out << "experiment,dataset,params,metric,value,runtime_s,seed\n";
    out.precision(10);
    for (const auto& row : rows_) {
        out << row.experiment << ',' << row.dataset << ',' << row.params << ','
            << row.metric << ',' << row.value << ',' << row.runtime_s << ','
            << row.seed << '\n';
    }
    if (!out) throw FormatError("write to '" + path + "' failed");
}

double recall_fraction(const std::vector<std::uint64_t>& candidates,
                       const std::vector<Neighbor>& nearest) {
    if (nearest.empty()) throw ParameterError("recall needs a nonempty truth set");
    std::unordered_set<std::uint64_t> got(candidates.begin(), candidates.end());
    std::size_t hit = 0;
    for (const auto& nb : nearest) {
        if (got.count(nb.id) != 0) ++hit;
    }
    return static_cast<double>(hit) / static_cast<double>(nearest.size());
}

double crann_accuracy(const std::vector<Point>& queries,
                      const std::vector<std::optional<std::uint64_t>>& returned,
                      const std::vector<IdPoint>& points, double r, double c) {
    if (queries.size() != returned.size())
        throw ShapeError("one answer per query required");
    if (queries.empty()) throw ParameterError("no queries to grade");
    std::size_t good = 0;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        if (classify_crann(queries[i], returned[i], points, r, c) ==
            CrannLabel::success)
            ++good;
    }
    return static_cast<double>(good) / static_cast<double>(queries.size());
}

}  // namespace streamsketch::bench
