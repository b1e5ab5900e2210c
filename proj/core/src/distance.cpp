#include "querysieve/distance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "internal_util.hpp"
#include "querysieve/ensemble.hpp"
#include "querysieve/errors.hpp"

namespace querysieve {

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

DetectorResult origin_distance_scores(const NormalizedMatrix& matrix) {
    if (matrix.rows() == 0) throw EmptyInputError("cannot score an empty matrix");

    DetectorResult result;
    result.detector_name = kOriginDistanceName;
    result.record_ids = matrix.ids();
    result.scores.resize(matrix.rows());
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        double sum = 0.0;
        for (double v : matrix.row(r)) sum += v * v;
        result.scores[r] = std::sqrt(sum);
    }
    result.outliers = rank_descending(result.record_ids, result.scores);
    return result;
}

DetectorResult average_distance_scores(const NormalizedMatrix& matrix) {
    const std::size_t n = matrix.rows();
    if (n < 2) {
        throw InsufficientDataError("average-distance scoring needs at least 2 records, got " +
                                    std::to_string(n));
    }

    DetectorResult result;
    result.detector_name = kAverageDistanceName;
    result.record_ids = matrix.ids();
    result.scores.resize(n);
    // O(N^2) over all pairs; per-record sums accumulate in fixed index
    // order so results are reproducible.
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        auto row_i = matrix.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            sum += euclidean_distance(row_i, matrix.row(j));
        }
        result.scores[i] = sum / static_cast<double>(n - 1);
    }
    result.outliers = rank_descending(result.record_ids, result.scores);
    return result;
}

UnmaskingResult iterative_unmasking(const Corpus& corpus, double r, std::size_t rounds) {
    if (rounds < 1) throw ArgumentError("rounds must be >= 1");
    if (!(r > 0.0) || r > 1.0) throw ArgumentError("fraction must lie in (0, 1]");

    UnmaskingResult out;
    std::vector<std::size_t> survivors(corpus.size());
    std::iota(survivors.begin(), survivors.end(), 0);

    for (std::size_t round = 0; round < rounds; ++round) {
        if (survivors.size() < 2) {
            out.exhausted = true;
            out.warning = "corpus exhausted after " + std::to_string(round) + " of " +
                          std::to_string(rounds) + " rounds";
            break;
        }
        Corpus current = corpus.subset(survivors);
        auto stats = compute_stats(current);
        auto matrix = normalize(current, stats);
        auto scored = origin_distance_scores(matrix);
        auto selected = top_fraction(scored, r);
        selected.detector_name = kOriginDistanceName;
        selected.params["round"] = std::to_string(round + 1);

        std::unordered_set<std::string> removed_ids(selected.outliers.begin(),
                                                    selected.outliers.end());
        UnmaskingRound step;
        step.result = selected;
        step.removed = selected.outliers;
        out.rounds.push_back(std::move(step));

        std::vector<std::size_t> next;
        next.reserve(survivors.size() - removed_ids.size());
        for (auto pos : survivors) {
            if (!removed_ids.contains(corpus.record(pos).id)) next.push_back(pos);
        }
        survivors = std::move(next);
    }
    return out;
}

} // namespace querysieve
