#include "querysieve/lof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "internal_util.hpp"
#include "querysieve/distance.hpp"
#include "querysieve/ensemble.hpp"
#include "querysieve/errors.hpp"

namespace querysieve {

NeighborhoodIndex build_neighborhoods(const NormalizedMatrix& matrix, std::size_t k) {
    const std::size_t n = matrix.rows();
    if (k < 1) throw ArgumentError("k must be >= 1");
    if (k >= n) {
        throw ArgumentError("k = " + std::to_string(k) + " must be < N = " + std::to_string(n));
    }

    NeighborhoodIndex index;
    index.k = k;
    index.k_distance.resize(n);
    index.neighbors.resize(n);

    std::vector<double> dist(n);
    std::vector<double> scratch;
    for (std::size_t p = 0; p < n; ++p) {
        auto row = matrix.row(p);
        for (std::size_t o = 0; o < n; ++o) {
            dist[o] = euclidean_distance(row, matrix.row(o));
        }
        scratch.clear();
        for (std::size_t o = 0; o < n; ++o) {
            if (o != p) scratch.push_back(dist[o]);
        }
        std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k - 1),
                         scratch.end());
        double kdist = scratch[k - 1];
        index.k_distance[p] = kdist;

        auto& nbrs = index.neighbors[p];
        for (std::size_t o = 0; o < n; ++o) {
            if (o != p && dist[o] <= kdist) nbrs.push_back({o, dist[o]});
        }
    }
    return index;
}

double reachability_distance(std::size_t p, std::size_t o, const NeighborhoodIndex& index,
                             const NormalizedMatrix& matrix) {
    if (p == o) throw ArgumentError("reachability distance is undefined for a point and itself");
    return std::max(index.k_distance[o], euclidean_distance(matrix.row(p), matrix.row(o)));
}

namespace {

double lrd_of(std::size_t p, const NeighborhoodIndex& index) {
    const auto& nbrs = index.neighbors[p];
    double sum = 0.0;
    for (const auto& nb : nbrs) {
        sum += std::max(index.k_distance[nb.position], nb.distance);
    }
    double mean = sum / static_cast<double>(nbrs.size());
    if (mean == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / mean;
}

} // namespace

double local_reachability_density(std::size_t p, const NeighborhoodIndex& index,
                                  const NormalizedMatrix& matrix) {
    (void)matrix; // neighbor distances are cached in the index
    return lrd_of(p, index);
}

std::pair<DetectorResult, LofResult> lof_scores(const NormalizedMatrix& matrix, std::size_t k) {
    auto index = build_neighborhoods(matrix, k);
    const std::size_t n = matrix.rows();

    LofResult lof;
    lof.lrd.resize(n);
    lof.lof.resize(n);
    lof.duplicates_collapsed.assign(n, false);
    for (std::size_t p = 0; p < n; ++p) {
        lof.lrd[p] = lrd_of(p, index);
        lof.duplicates_collapsed[p] = std::isinf(lof.lrd[p]);
    }

    for (std::size_t p = 0; p < n; ++p) {
        const auto& nbrs = index.neighbors[p];
        double own = lof.lrd[p];
        double sum = 0.0;
        for (const auto& nb : nbrs) {
            double other = lof.lrd[nb.position];
            double ratio;
            if (std::isinf(other) && std::isinf(own)) ratio = 1.0;
            else if (std::isinf(own)) ratio = 0.0;
            else ratio = other / own; // may be +inf when a neighbor collapsed
            sum += ratio;
        }
        lof.lof[p] = sum / static_cast<double>(nbrs.size());
    }

    DetectorResult result;
    result.detector_name = kLofName;
    result.record_ids = matrix.ids();
    result.scores.resize(n);
    for (std::size_t p = 0; p < n; ++p) {
        // Rank-preserving cap: detector scores stay finite.
        result.scores[p] =
            std::isinf(lof.lof[p]) ? std::numeric_limits<double>::max() : lof.lof[p];
    }
    result.outliers = rank_descending(result.record_ids, result.scores);
    result.params["k"] = std::to_string(k);
    return {std::move(result), std::move(lof)};
}

std::string lof_diagnostics_to_csv(const NormalizedMatrix& matrix, const NeighborhoodIndex& index,
                                   const LofResult& result) {
    std::ostringstream out;
    out << "id,k_distance,lrd,lof\n";
    for (std::size_t p = 0; p < matrix.rows(); ++p) {
        out << matrix.ids()[p] << ',' << detail::format_double(index.k_distance[p]) << ','
            << (std::isinf(result.lrd[p]) ? "inf" : detail::format_double(result.lrd[p])) << ','
            << (std::isinf(result.lof[p]) ? "inf" : detail::format_double(result.lof[p])) << '\n';
    }
    return out.str();
}

} // namespace querysieve
