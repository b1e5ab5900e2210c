#include "querysieve/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "internal_util.hpp"
#include "querysieve/distance.hpp"
#include "querysieve/ensemble.hpp"
#include "querysieve/errors.hpp"
#include "querysieve/rng.hpp"

namespace querysieve {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

std::vector<std::vector<double>> kmeanspp_init(const NormalizedMatrix& matrix, std::size_t k,
                                               Rng& rng) {
    const std::size_t n = matrix.rows();
    std::vector<std::vector<double>> centroids;
    centroids.reserve(k);

    auto first = rng.uniform_index(n);
    centroids.emplace_back(matrix.row(first).begin(), matrix.row(first).end());

    std::vector<double> d2(n);
    for (std::size_t r = 0; r < n; ++r) d2[r] = squared_distance(matrix.row(r), centroids[0]);

    while (centroids.size() < k) {
        double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        if (!(total > 0.0)) {
            throw ArgumentError("k exceeds the number of distinct rows");
        }
        double target = rng.uniform01() * total;
        double cum = 0.0;
        std::size_t chosen = n;
        for (std::size_t r = 0; r < n; ++r) {
            cum += d2[r];
            if (cum > target) { chosen = r; break; }
        }
        if (chosen == n) { // fp edge: take the last positive-weight row
            for (std::size_t r = n; r-- > 0;) {
                if (d2[r] > 0.0) { chosen = r; break; }
            }
        }
        centroids.emplace_back(matrix.row(chosen).begin(), matrix.row(chosen).end());
        for (std::size_t r = 0; r < n; ++r) {
            d2[r] = std::min(d2[r], squared_distance(matrix.row(r), centroids.back()));
        }
    }
    return centroids;
}

std::vector<std::size_t> assign_nearest(const NormalizedMatrix& matrix,
                                        const std::vector<std::vector<double>>& centroids) {
    const std::size_t n = matrix.rows();
    std::vector<std::size_t> assignment(n);
    for (std::size_t r = 0; r < n; ++r) {
        auto row = matrix.row(r);
        double best = squared_distance(row, centroids[0]);
        std::size_t best_c = 0;
        for (std::size_t c = 1; c < centroids.size(); ++c) {
            double d = squared_distance(row, centroids[c]);
            if (d < best) { // strict: ties stay with the lowest index
                best = d;
                best_c = c;
            }
        }
        assignment[r] = best_c;
    }
    return assignment;
}

std::vector<std::size_t> count_populations(const std::vector<std::size_t>& assignment,
                                           std::size_t k) {
    std::vector<std::size_t> populations(k, 0);
    for (auto c : assignment) ++populations[c];
    return populations;
}

// Assigns records to centroids and reseeds any empty cluster to the
// record farthest from its current centroid. Mutates centroids.
std::vector<std::size_t> assign_with_repair(const NormalizedMatrix& matrix,
                                            std::vector<std::vector<double>>& centroids) {
    const std::size_t k = centroids.size();
    for (std::size_t attempt = 0; attempt <= k; ++attempt) {
        auto assignment = assign_nearest(matrix, centroids);
        auto populations = count_populations(assignment, k);

        std::vector<std::size_t> empty;
        for (std::size_t c = 0; c < k; ++c) {
            if (populations[c] == 0) empty.push_back(c);
        }
        if (empty.empty()) return assignment;

        std::vector<bool> taken(matrix.rows(), false);
        for (auto c : empty) {
            double best_d = 0.0;
            std::size_t best_r = matrix.rows();
            for (std::size_t r = 0; r < matrix.rows(); ++r) {
                if (taken[r] || populations[assignment[r]] <= 1) continue;
                double d = squared_distance(matrix.row(r), centroids[assignment[r]]);
                if (d > best_d) { best_d = d; best_r = r; }
            }
            if (best_r == matrix.rows()) {
                throw ArgumentError("k exceeds the number of distinct rows");
            }
            centroids[c].assign(matrix.row(best_r).begin(), matrix.row(best_r).end());
            taken[best_r] = true;
            --populations[assignment[best_r]];
        }
    }
    throw ArgumentError("k exceeds the number of distinct rows");
}

double total_inertia(const NormalizedMatrix& matrix, const std::vector<std::size_t>& assignment,
                     const std::vector<std::vector<double>>& centroids) {
    double sum = 0.0;
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        sum += squared_distance(matrix.row(r), centroids[assignment[r]]);
    }
    return sum;
}

} // namespace

ClusterModel kmeans(const NormalizedMatrix& matrix, std::size_t k, std::uint64_t seed,
                    std::size_t max_iter, double tol) {
    const std::size_t n = matrix.rows();
    if (k == 0) throw ArgumentError("k must be >= 1");
    if (k > n) throw ArgumentError("k = " + std::to_string(k) + " exceeds N = " + std::to_string(n));
    if (max_iter < 1) throw ArgumentError("max_iter must be >= 1");
    if (tol < 0.0) throw ArgumentError("tol must be >= 0");

    Rng rng(seed);
    auto centroids = kmeanspp_init(matrix, k, rng);

    ClusterModel model;
    model.k = k;
    model.seed = seed;

    std::vector<std::size_t> assignment;
    for (std::size_t it = 0; it < max_iter; ++it) {
        assignment = assign_with_repair(matrix, centroids);
        model.inertia_history.push_back(total_inertia(matrix, assignment, centroids));
        model.iterations_run = it + 1;

        // Mean update, accumulated in record order for reproducibility.
        std::vector<std::vector<double>> sums(k, std::vector<double>(matrix.cols(), 0.0));
        auto populations = count_populations(assignment, k);
        for (std::size_t r = 0; r < n; ++r) {
            auto row = matrix.row(r);
            auto& acc = sums[assignment[r]];
            for (std::size_t f = 0; f < matrix.cols(); ++f) acc[f] += row[f];
        }
        double movement = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t f = 0; f < matrix.cols(); ++f) {
                sums[c][f] /= static_cast<double>(populations[c]);
            }
            movement = std::max(movement, std::sqrt(squared_distance(sums[c], centroids[c])));
        }
        centroids = std::move(sums);
        if (movement <= tol) break;
    }

    // Sync the assignment to the final centroids so the model is a fixed
    // point of nearest-centroid reassignment.
    assignment = assign_with_repair(matrix, centroids);
    model.inertia_history.push_back(total_inertia(matrix, assignment, centroids));
    model.centroids = std::move(centroids);
    model.assignment = std::move(assignment);
    model.populations = count_populations(model.assignment, k);
    model.inertia = model.inertia_history.back();
    return model;
}

std::vector<std::size_t> smallest_clusters_accumulate(const std::vector<std::size_t>& populations,
                                                      double n) {
    if (!(n > 0.0) || n >= 1.0) throw ArgumentError("fraction must lie in (0, 1)");
    std::size_t total = std::accumulate(populations.begin(), populations.end(), std::size_t{0});
    double threshold = n * static_cast<double>(total);

    std::vector<std::size_t> order(populations.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return populations[a] < populations[b]; // ties by lower index (stable)
    });

    std::vector<std::size_t> included;
    std::size_t sum = 0;
    for (auto c : order) {
        included.push_back(c);
        sum += populations[c];
        if (static_cast<double>(sum) > threshold) break;
    }
    return included;
}

std::vector<std::size_t> smallest_clusters_accumulate(const ClusterModel& model, double n) {
    return smallest_clusters_accumulate(model.populations, n);
}

DetectorResult refine_exact_fraction(const ClusterModel& model, const NormalizedMatrix& matrix,
                                     double n) {
    const std::size_t total = matrix.rows();
    auto accumulated = smallest_clusters_accumulate(model, n);
    std::size_t target = std::min(
        static_cast<std::size_t>(std::ceil(n * static_cast<double>(total))), total);

    DetectorResult result;
    result.detector_name = kClusterSmallestName;
    result.record_ids = matrix.ids();
    result.scores.resize(total);
    for (std::size_t r = 0; r < total; ++r) {
        result.scores[r] = euclidean_distance(matrix.row(r), model.centroids[model.assignment[r]]);
    }

    std::vector<std::size_t> selected;
    selected.reserve(target);
    for (std::size_t i = 0; i + 1 < accumulated.size(); ++i) {
        for (std::size_t r = 0; r < total; ++r) {
            if (model.assignment[r] == accumulated[i]) selected.push_back(r);
        }
    }
    // Last cluster: farthest-from-centroid members first, up to the target.
    std::size_t last = accumulated.back();
    std::vector<std::size_t> members;
    for (std::size_t r = 0; r < total; ++r) {
        if (model.assignment[r] == last) members.push_back(r);
    }
    std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
        return result.scores[a] > result.scores[b];
    });
    for (auto r : members) {
        if (selected.size() >= target) break;
        selected.push_back(r);
    }

    // Present the selection ranked like every other detector.
    std::stable_sort(selected.begin(), selected.end(), [&](std::size_t a, std::size_t b) {
        if (result.scores[a] != result.scores[b]) return result.scores[a] > result.scores[b];
        return a < b;
    });
    result.outliers.reserve(selected.size());
    for (auto r : selected) result.outliers.push_back(result.record_ids[r]);

    result.params["fraction"] = detail::format_double(n);
    result.params["k"] = std::to_string(model.k);
    std::string acc;
    for (auto c : accumulated) {
        if (!acc.empty()) acc += ",";
        acc += std::to_string(c);
    }
    result.params["accumulated_clusters"] = acc;
    return result;
}

std::vector<std::pair<std::size_t, std::size_t>> cluster_population_report(const ClusterModel& model) {
    std::vector<std::pair<std::size_t, std::size_t>> report;
    report.reserve(model.k);
    for (std::size_t c = 0; c < model.k; ++c) report.emplace_back(c, model.populations[c]);
    std::stable_sort(report.begin(), report.end(), [](const auto& a, const auto& b) {
        return a.second < b.second; // ties keep ascending index (stable)
    });
    return report;
}

std::string cluster_report_to_csv(const ClusterModel& model) {
    std::ostringstream out;
    out << "cluster,population\n";
    for (const auto& [cluster, population] : cluster_population_report(model)) {
        out << cluster << ',' << population << '\n';
    }
    return out.str();
}

} // namespace querysieve
