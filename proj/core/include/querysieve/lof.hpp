#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "querysieve/detector.hpp"

namespace querysieve {

/// Exact k-distance neighborhoods with tie inclusion: every record at
/// distance <= k_distance is a neighbor, so the set can hold more than k
/// members. A record is never its own neighbor.
struct NeighborhoodIndex {
    struct Neighbor {
        std::size_t position = 0;
        double distance = 0.0;
    };
    std::size_t k = 0;
    std::vector<double> k_distance;               // per record
    std::vector<std::vector<Neighbor>> neighbors; // per record, ascending position
};

/// Per-record density diagnostics. lrd is +infinity when every
/// reachability distance is 0 (exact duplicates); duplicates_collapsed
/// marks those records.
struct LofResult {
    std::vector<double> lrd;
    std::vector<double> lof;
    std::vector<bool> duplicates_collapsed;
};

/// Brute-force exact neighbor search (no spatial index); requires
/// 1 <= k <= N-1, else ArgumentError.
NeighborhoodIndex build_neighborhoods(const NormalizedMatrix& matrix, std::size_t k);

/// max(k_distance(o), dist(p, o)). Not symmetric. p == o is an
/// ArgumentError.
double reachability_distance(std::size_t p, std::size_t o, const NeighborhoodIndex& index,
                             const NormalizedMatrix& matrix);

/// 1 / mean reachability distance from p to its neighbors; +infinity when
/// that mean is 0.
double local_reachability_density(std::size_t p, const NeighborhoodIndex& index,
                                  const NormalizedMatrix& matrix);

/// LOF(p) = mean over neighbors o of lrd(o)/lrd(p), with inf/inf := 1 and
/// finite/inf := 0. Detector scores cap +infinity at
/// numeric_limits<double>::max() so the ranking stays well-defined.
std::pair<DetectorResult, LofResult> lof_scores(const NormalizedMatrix& matrix, std::size_t k);

/// Per-record k_distance,lrd,lof CSV for inspection.
std::string lof_diagnostics_to_csv(const NormalizedMatrix& matrix, const NeighborhoodIndex& index,
                                   const LofResult& result);

} // namespace querysieve
