#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "querysieve/corpus.hpp"

namespace querysieve {

/// Robust location/scale for one feature. Quartiles use linear
/// interpolation at p*(n-1) on the sorted values. fallback_scale is
/// MAD * 1.4826, or 1 when that is 0; it is the divisor when iqr == 0
/// but the feature is not constant.
struct FeatureStat {
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double iqr = 0.0;
    double fallback_scale = 1.0;
    bool constant = false;
};

struct FeatureStats {
    FeatureSchema schema;
    std::vector<FeatureStat> per_feature;

    const FeatureStat& at(std::size_t i) const { return per_feature[i]; }
    std::size_t size() const { return per_feature.size(); }
};

/// Row-major normalized matrix, rows aligned to corpus order.
class NormalizedMatrix {
public:
    NormalizedMatrix() = default;
    NormalizedMatrix(std::vector<std::string> ids, std::size_t n_cols,
                     std::vector<double> values);

    std::size_t rows() const { return ids_.size(); }
    std::size_t cols() const { return n_cols_; }
    const std::vector<std::string>& ids() const { return ids_; }
    std::span<const double> row(std::size_t r) const {
        return {values_.data() + r * n_cols_, n_cols_};
    }
    double at(std::size_t r, std::size_t c) const { return values_[r * n_cols_ + c]; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<std::string> ids_;
    std::size_t n_cols_ = 0;
    std::vector<double> values_;
};

/// Per-feature median/quartiles/IQR over the corpus. Throws
/// EmptyInputError on an empty corpus.
FeatureStats compute_stats(const Corpus& corpus);

/// (x - median) / iqr; falls back to fallback_scale when iqr == 0 and the
/// feature is not constant; constant features map to 0. Throws
/// SchemaError when the stats were computed for a different schema.
NormalizedMatrix normalize(const Corpus& corpus, const FeatureStats& stats);

/// Inverse of the affine map above (for audit round-trips).
double denormalize_value(double normalized, const FeatureStat& stat);

/// Linear-interpolation quantile at p*(n-1); `sorted` must be ascending
/// and non-empty.
double quantile_sorted(std::span<const double> sorted, double p);

/// Stats as a JSON object string (the `stats` subcommand payload).
std::string feature_stats_to_json(const FeatureStats& stats);

} // namespace querysieve
