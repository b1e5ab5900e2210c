#include "querysieve/corpus.hpp"

#include <cmath>
#include <unordered_set>

#include "querysieve/errors.hpp"

namespace querysieve {

FeatureSchema::FeatureSchema(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) {
        throw SchemaError("feature schema must name at least one feature");
    }
    std::unordered_set<std::string> seen;
    for (const auto& n : names_) {
        if (n.empty()) {
            throw SchemaError("feature names must be non-empty");
        }
        if (!seen.insert(n).second) {
            throw SchemaError("duplicate feature name: " + n);
        }
    }
}

std::optional<std::size_t> FeatureSchema::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return i;
    }
    return std::nullopt;
}

void validate_features(const FeatureSchema& schema, const std::vector<double>& features) {
    if (features.size() != schema.size()) {
        throw ArgumentError("feature vector has " + std::to_string(features.size()) +
                            " components, schema expects " + std::to_string(schema.size()));
    }
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (!std::isfinite(features[i])) {
            throw ArgumentError("feature " + schema.name(i) + " is not finite");
        }
        if (features[i] < 0.0) {
            throw ArgumentError("feature " + schema.name(i) + " is negative; costs are non-negative");
        }
    }
}

Corpus::Corpus(FeatureSchema schema, std::vector<QueryRecord> records)
    : schema_(std::move(schema)), records_(std::move(records)) {
    std::unordered_set<std::string> ids;
    ids.reserve(records_.size());
    for (const auto& r : records_) {
        if (!ids.insert(r.id).second) {
            throw DuplicateIdError("duplicate record id: " + r.id);
        }
        validate_features(schema_, r.features);
    }
}

std::vector<std::string> Corpus::ids() const {
    std::vector<std::string> out;
    out.reserve(records_.size());
    for (const auto& r : records_) out.push_back(r.id);
    return out;
}

Corpus Corpus::subset(const std::vector<std::size_t>& positions) const {
    std::vector<QueryRecord> picked;
    picked.reserve(positions.size());
    for (auto p : positions) picked.push_back(records_.at(p));
    return Corpus(schema_, std::move(picked));
}

} // namespace querysieve
