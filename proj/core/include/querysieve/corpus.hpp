#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace querysieve {

/// Ordered list of feature names. The order fixes the component order of
/// every feature vector downstream (stats, matrices, centroids).
class FeatureSchema {
public:
    FeatureSchema() = default;

    /// Throws SchemaError if names are empty, duplicated, or blank.
    explicit FeatureSchema(std::vector<std::string> names);

    const std::vector<std::string>& names() const { return names_; }
    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_[i]; }

    /// Index of a feature name, or nullopt when absent.
    std::optional<std::size_t> index_of(const std::string& name) const;

    bool operator==(const FeatureSchema&) const = default;

private:
    std::vector<std::string> names_;
};

/// One executed query or job. `sql_text` is carried as metadata only;
/// all numeric work happens on `features`.
struct QueryRecord {
    std::string id;
    std::optional<std::string> sql_text;
    std::vector<double> features;

    bool operator==(const QueryRecord&) const = default;
};

/// Ordered collection of records sharing one schema. Immutable once built;
/// safe to share read-only across threads.
class Corpus {
public:
    Corpus() = default;

    /// Validates: unique ids, per-record feature count == schema size,
    /// every component finite and >= 0. Throws on violation.
    Corpus(FeatureSchema schema, std::vector<QueryRecord> records);

    const FeatureSchema& schema() const { return schema_; }
    const std::vector<QueryRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    const QueryRecord& record(std::size_t i) const { return records_[i]; }

    /// All record ids in corpus order.
    std::vector<std::string> ids() const;

    /// Corpus restricted to the records at `positions` (order preserved).
    Corpus subset(const std::vector<std::size_t>& positions) const;

    bool operator==(const Corpus&) const = default;

private:
    FeatureSchema schema_;
    std::vector<QueryRecord> records_;
};

/// Validates a feature vector against a schema (length, finiteness, sign).
/// Throws ArgumentError naming the offending component.
void validate_features(const FeatureSchema& schema, const std::vector<double>& features);

} // namespace querysieve
