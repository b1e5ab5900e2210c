#include "querysieve/synthetic.hpp"

#include <algorithm>

#include "querysieve/errors.hpp"
#include "querysieve/rng.hpp"

namespace querysieve {

SyntheticCorpus generate_synthetic(std::size_t n_inliers, const std::vector<PlantedGroup>& planted,
                                   const std::vector<double>& spread, std::uint64_t seed,
                                   const std::vector<double>& baseline,
                                   const std::vector<std::string>& feature_names) {
    if (spread.empty()) throw ArgumentError("spread must name at least one feature scale");
    const std::size_t dims = spread.size();
    for (double s : spread) {
        if (!(s >= 0.0)) throw ArgumentError("spread components must be >= 0");
    }

    std::vector<double> center = baseline;
    if (center.empty()) center.assign(dims, 100.0);
    if (center.size() != dims) throw ArgumentError("baseline length must match spread length");

    std::vector<std::string> names = feature_names;
    if (names.empty()) {
        if (dims == 4) {
            names = {"cpu_cost", "io_cost", "memory", "rows_impacted"};
        } else {
            for (std::size_t i = 0; i < dims; ++i) names.push_back("feature_" + std::to_string(i));
        }
    }
    FeatureSchema schema(names);
    if (schema.size() != dims) throw ArgumentError("feature_names length must match spread length");

    for (const auto& group : planted) {
        if (group.features.size() != dims) {
            throw ArgumentError("planted vector length must match spread length");
        }
    }

    Rng rng(seed);
    std::vector<QueryRecord> records;
    records.reserve(n_inliers);
    for (std::size_t i = 0; i < n_inliers; ++i) {
        QueryRecord rec;
        rec.id = "q" + std::to_string(i + 1);
        rec.features.resize(dims);
        for (std::size_t f = 0; f < dims; ++f) {
            rec.features[f] = std::max(0.0, center[f] + spread[f] * rng.normal());
        }
        records.push_back(std::move(rec));
    }

    SyntheticCorpus out;
    std::size_t planted_no = 0;
    for (const auto& group : planted) {
        for (std::size_t c = 0; c < group.count; ++c) {
            QueryRecord rec;
            rec.id = "planted_" + std::to_string(++planted_no);
            rec.features = group.features; // verbatim; Corpus validates sign
            out.planted_ids.push_back(rec.id);
            records.push_back(std::move(rec));
        }
    }

    out.corpus = Corpus(schema, std::move(records));
    return out;
}

} // namespace querysieve
