#pragma once

#include <cstdint>
#include <vector>

#include "querysieve/detector.hpp"

namespace querysieve {

/// Result of one k-means fit in normalized space. Immutable once built.
struct ClusterModel {
    std::size_t k = 0;
    std::vector<std::vector<double>> centroids;
    std::vector<std::size_t> assignment;  // per record, in [0, k)
    std::vector<std::size_t> populations; // per cluster, sums to N
    double inertia = 0.0;                 // within-cluster sum of squares
    std::size_t iterations_run = 0;
    std::uint64_t seed = 0;
    std::vector<double> inertia_history;  // one entry per assignment pass
};

/// Lloyd iterations from k-means++ seeding. Stops when the largest
/// centroid displacement drops below `tol` or after `max_iter` rounds.
/// Empty clusters are reseeded to the record farthest from its assigned
/// centroid. Deterministic in (matrix, k, seed, max_iter, tol).
/// Throws ArgumentError for k == 0, k > N, or k above the number of
/// distinct rows.
ClusterModel kmeans(const NormalizedMatrix& matrix, std::size_t k, std::uint64_t seed,
                    std::size_t max_iter = 100, double tol = 1e-7);

/// Clusters in ascending-population order (ties by lower index),
/// accumulated until the running population sum first exceeds n * N
/// (strict >). Returns every cluster included at that point.
std::vector<std::size_t> smallest_clusters_accumulate(const ClusterModel& model, double n);

/// Population-vector core of the accumulation rule, exposed for direct
/// property testing.
std::vector<std::size_t> smallest_clusters_accumulate(const std::vector<std::size_t>& populations,
                                                      double n);

/// Exact-fraction outlier set: all members of the accumulated clusters
/// except the last, then the last cluster's members by descending
/// distance from its centroid until ceil(n * N) ids are selected.
/// Scores are distances from each record's own centroid.
DetectorResult refine_exact_fraction(const ClusterModel& model, const NormalizedMatrix& matrix,
                                     double n);

/// (cluster index, population) pairs in ascending population order,
/// ready for bar-chart emission.
std::vector<std::pair<std::size_t, std::size_t>> cluster_population_report(const ClusterModel& model);

/// CSV lines `cluster,population` in ascending-population order.
std::string cluster_report_to_csv(const ClusterModel& model);

} // namespace querysieve
