#pragma once

#include <map>
#include <string>
#include <vector>

#include "querysieve/detector.hpp"

namespace querysieve {

enum class CombineMode { Union, Intersection };

const char* to_string(CombineMode mode);
CombineMode combine_mode_from_string(const std::string& s);

/// Union/intersection of detector outlier sets. `method_count` and
/// `count_table` are always computed over the union so the
/// methods-vs-observations table is available in either mode.
struct EnsembleReport {
    CombineMode mode = CombineMode::Union;
    std::vector<std::string> member_detectors;
    std::vector<std::string> combined;               // sorted ids
    std::map<std::string, std::size_t> method_count; // per union id
    std::map<std::size_t, std::size_t> count_table;  // m -> #ids flagged by exactly m
};

/// Requires >= 2 results over the same id universe; throws
/// CorpusMismatchError otherwise. Pure set algebra over the outlier
/// lists; input order does not matter.
EnsembleReport combine(const std::vector<DetectorResult>& results, CombineMode mode);

/// The three detectors combined by default; LOF joins only by explicit
/// opt-in.
std::vector<std::string> default_pipeline_members();

/// Canonical detector names.
inline constexpr const char* kOriginDistanceName = "origin_distance";
inline constexpr const char* kAverageDistanceName = "average_distance";
inline constexpr const char* kClusterSmallestName = "cluster_smallest";
inline constexpr const char* kLofName = "lof";

/// CSV `methods,count` rows plus a grand-total row.
std::string count_table_to_csv(const EnsembleReport& report);

} // namespace querysieve
