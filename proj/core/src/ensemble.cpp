#include "querysieve/ensemble.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "querysieve/errors.hpp"

namespace querysieve {

const char* to_string(CombineMode mode) {
    return mode == CombineMode::Union ? "union" : "intersection";
}

CombineMode combine_mode_from_string(const std::string& s) {
    if (s == "union") return CombineMode::Union;
    if (s == "intersection") return CombineMode::Intersection;
    throw ArgumentError("combine mode must be union or intersection, got '" + s + "'");
}

std::vector<std::string> default_pipeline_members() {
    return {kOriginDistanceName, kAverageDistanceName, kClusterSmallestName};
}

EnsembleReport combine(const std::vector<DetectorResult>& results, CombineMode mode) {
    if (results.size() < 2) {
        throw ArgumentError("combining requires at least 2 detector results, got " +
                            std::to_string(results.size()));
    }
    std::set<std::string> universe(results.front().record_ids.begin(),
                                   results.front().record_ids.end());
    for (const auto& result : results) {
        std::set<std::string> ids(result.record_ids.begin(), result.record_ids.end());
        if (ids != universe) {
            throw CorpusMismatchError("detector '" + result.detector_name +
                                      "' was run on a different corpus");
        }
    }

    EnsembleReport report;
    report.mode = mode;
    for (const auto& result : results) report.member_detectors.push_back(result.detector_name);

    for (const auto& result : results) {
        std::set<std::string> flagged(result.outliers.begin(), result.outliers.end());
        for (const auto& id : flagged) ++report.method_count[id];
    }
    for (const auto& [id, count] : report.method_count) ++report.count_table[count];

    if (mode == CombineMode::Union) {
        for (const auto& [id, count] : report.method_count) report.combined.push_back(id);
    } else {
        for (const auto& [id, count] : report.method_count) {
            if (count == results.size()) report.combined.push_back(id);
        }
    }
    return report;
}

std::string count_table_to_csv(const EnsembleReport& report) {
    std::ostringstream out;
    out << "methods,count\n";
    std::size_t total = 0;
    for (const auto& [methods, count] : report.count_table) {
        out << methods << ',' << count << '\n';
        total += count;
    }
    out << "grand_total," << total << '\n';
    return out.str();
}

} // namespace querysieve
