#pragma once

#include <string>
#include <vector>

#include "querysieve/corpus.hpp"
#include "querysieve/rng.hpp"
#include "querysieve/stats.hpp"

namespace test_support {

inline querysieve::NormalizedMatrix make_matrix(const std::vector<std::vector<double>>& rows) {
    std::vector<std::string> ids;
    std::vector<double> values;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        ids.push_back("r" + std::to_string(r));
        values.insert(values.end(), rows[r].begin(), rows[r].end());
    }
    return querysieve::NormalizedMatrix(ids, rows.empty() ? 0 : rows[0].size(), values);
}

inline std::vector<std::vector<double>> matrix_rows(const querysieve::NormalizedMatrix& m) {
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        rows.emplace_back(row.begin(), row.end());
    }
    return rows;
}

inline querysieve::Corpus random_corpus(std::size_t n, std::size_t dims, std::uint64_t seed,
                                        double center = 100.0, double scale = 10.0) {
    querysieve::Rng rng(seed);
    std::vector<std::string> names;
    for (std::size_t f = 0; f < dims; ++f) names.push_back("f" + std::to_string(f));
    std::vector<querysieve::QueryRecord> records;
    for (std::size_t i = 0; i < n; ++i) {
        querysieve::QueryRecord rec;
        rec.id = "q" + std::to_string(i);
        for (std::size_t f = 0; f < dims; ++f) {
            rec.features.push_back(std::max(0.0, center + scale * rng.normal()));
        }
        records.push_back(std::move(rec));
    }
    return querysieve::Corpus(querysieve::FeatureSchema(names), std::move(records));
}

} // namespace test_support
