// Test-only reference implementations, written as direct transliterations
// of the defining formulas and kept independent of the library code paths
// they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline double dist(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc);
}

inline Matrix distance_matrix(const Matrix& points) {
    const std::size_t n = points.size();
    Matrix d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) d[i][j] = dist(points[i], points[j]);
    }
    return d;
}

// Mean distance to every other point.
inline std::vector<double> average_distance(const Matrix& points) {
    const std::size_t n = points.size();
    auto d = distance_matrix(points);
    std::vector<double> scores(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) sum += d[i][j];
        }
        scores[i] = sum / static_cast<double>(n - 1);
    }
    return scores;
}

struct LofOracle {
    std::vector<double> k_distance;
    std::vector<std::vector<std::size_t>> neighbors; // ascending position
    std::vector<double> lrd;
    std::vector<double> lof;
};

// k-distance = k-th smallest distance to other points (full sort);
// neighborhood = every other point within it (ties included);
// lrd = |N| / sum of max(k_distance(o), d(p,o));
// lof = mean of lrd(o)/lrd(p), with inf/inf = 1 and finite/inf = 0.
inline LofOracle lof(const Matrix& points, std::size_t k) {
    const std::size_t n = points.size();
    auto d = distance_matrix(points);
    LofOracle out;
    out.k_distance.resize(n);
    out.neighbors.resize(n);
    out.lrd.resize(n);
    out.lof.resize(n);

    for (std::size_t p = 0; p < n; ++p) {
        std::vector<double> others;
        for (std::size_t o = 0; o < n; ++o) {
            if (o != p) others.push_back(d[p][o]);
        }
        std::sort(others.begin(), others.end());
        out.k_distance[p] = others[k - 1];
        for (std::size_t o = 0; o < n; ++o) {
            if (o != p && d[p][o] <= out.k_distance[p]) out.neighbors[p].push_back(o);
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        double sum = 0.0;
        for (auto o : out.neighbors[p]) sum += std::max(out.k_distance[o], d[p][o]);
        out.lrd[p] = sum == 0.0 ? std::numeric_limits<double>::infinity()
                                : static_cast<double>(out.neighbors[p].size()) / sum;
    }
    for (std::size_t p = 0; p < n; ++p) {
        double sum = 0.0;
        for (auto o : out.neighbors[p]) {
            double ratio;
            if (std::isinf(out.lrd[o]) && std::isinf(out.lrd[p])) ratio = 1.0;
            else if (std::isinf(out.lrd[p])) ratio = 0.0;
            else ratio = out.lrd[o] / out.lrd[p];
            sum += ratio;
        }
        out.lof[p] = sum / static_cast<double>(out.neighbors[p].size());
    }
    return out;
}

// Minimal prefix of the ascending-population order whose sum strictly
// exceeds fraction * total.
inline std::vector<std::size_t> minimal_prefix(const std::vector<std::size_t>& populations,
                                               double fraction) {
    std::vector<std::size_t> order(populations.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return populations[a] < populations[b]; });
    std::size_t total = std::accumulate(populations.begin(), populations.end(), std::size_t{0});
    std::size_t sum = 0;
    std::vector<std::size_t> prefix;
    for (auto c : order) {
        prefix.push_back(c);
        sum += populations[c];
        if (static_cast<double>(sum) > fraction * static_cast<double>(total)) return prefix;
    }
    return prefix;
}

// Best 2-partition of sorted 1-D values by exhaustive split enumeration.
struct TwoPartition {
    std::size_t split = 0; // first `split` values in cluster A
    double inertia = 0.0;
};
inline TwoPartition best_two_partition_1d(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    auto sse = [&](std::size_t lo, std::size_t hi) {
        double mean = 0.0;
        for (std::size_t i = lo; i < hi; ++i) mean += values[i];
        mean /= static_cast<double>(hi - lo);
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += (values[i] - mean) * (values[i] - mean);
        return acc;
    };
    TwoPartition best;
    best.inertia = std::numeric_limits<double>::max();
    for (std::size_t split = 1; split < values.size(); ++split) {
        double total = sse(0, split) + sse(split, values.size());
        if (total < best.inertia) {
            best.inertia = total;
            best.split = split;
        }
    }
    return best;
}

} // namespace oracle
