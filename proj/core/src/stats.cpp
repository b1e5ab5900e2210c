#include "querysieve/stats.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "querysieve/errors.hpp"

namespace querysieve {

double quantile_sorted(std::span<const double> sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    double h = p * static_cast<double>(n - 1);
    auto lo = static_cast<std::size_t>(h);
    if (lo >= n - 1) return sorted[n - 1];
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + (sorted[lo + 1] - sorted[lo]) * frac;
}

NormalizedMatrix::NormalizedMatrix(std::vector<std::string> ids, std::size_t n_cols,
                                   std::vector<double> values)
    : ids_(std::move(ids)), n_cols_(n_cols), values_(std::move(values)) {
    if (values_.size() != ids_.size() * n_cols_) {
        throw ArgumentError("matrix value count does not match rows x cols");
    }
}

FeatureStats compute_stats(const Corpus& corpus) {
    if (corpus.empty()) throw EmptyInputError("cannot compute stats on an empty corpus");

    const std::size_t n = corpus.size();
    const std::size_t dims = corpus.schema().size();
    FeatureStats stats;
    stats.schema = corpus.schema();
    stats.per_feature.resize(dims);

    std::vector<double> column(n);
    for (std::size_t f = 0; f < dims; ++f) {
        for (std::size_t r = 0; r < n; ++r) column[r] = corpus.record(r).features[f];
        std::sort(column.begin(), column.end());

        FeatureStat s;
        s.q1 = quantile_sorted(column, 0.25);
        s.median = quantile_sorted(column, 0.50);
        s.q3 = quantile_sorted(column, 0.75);
        s.iqr = s.q3 - s.q1;
        s.constant = column.front() == column.back();

        std::vector<double> deviations(n);
        for (std::size_t r = 0; r < n; ++r) deviations[r] = std::abs(column[r] - s.median);
        std::sort(deviations.begin(), deviations.end());
        double mad = quantile_sorted(deviations, 0.50);
        s.fallback_scale = mad > 0.0 ? mad * 1.4826 : 1.0;

        stats.per_feature[f] = s;
    }
    return stats;
}

NormalizedMatrix normalize(const Corpus& corpus, const FeatureStats& stats) {
    if (stats.schema != corpus.schema()) {
        throw SchemaError("stats were computed for a different schema");
    }
    const std::size_t n = corpus.size();
    const std::size_t dims = corpus.schema().size();
    std::vector<double> values(n * dims);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& feats = corpus.record(r).features;
        for (std::size_t f = 0; f < dims; ++f) {
            const auto& s = stats.at(f);
            double v;
            if (s.constant) {
                v = 0.0;
            } else if (s.iqr > 0.0) {
                v = (feats[f] - s.median) / s.iqr;
            } else {
                v = (feats[f] - s.median) / s.fallback_scale;
            }
            values[r * dims + f] = v;
        }
    }
    return NormalizedMatrix(corpus.ids(), dims, std::move(values));
}

double denormalize_value(double normalized, const FeatureStat& stat) {
    if (stat.constant) return stat.median;
    double scale = stat.iqr > 0.0 ? stat.iqr : stat.fallback_scale;
    return normalized * scale + stat.median;
}

std::string feature_stats_to_json(const FeatureStats& stats) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t f = 0; f < stats.size(); ++f) {
        const auto& s = stats.at(f);
        arr.push_back({
            {"feature", stats.schema.name(f)},
            {"median", s.median},
            {"q1", s.q1},
            {"q3", s.q3},
            {"iqr", s.iqr},
            {"fallback_scale", s.fallback_scale},
            {"constant", s.constant},
        });
    }
    return nlohmann::json{{"feature_stats", arr}}.dump(2);
}

} // namespace querysieve
