#pragma once

#include <string>
#include <vector>

#include "querysieve/detector.hpp"

namespace querysieve {

/// Score = Euclidean distance of the normalized row from the origin.
/// Throws EmptyInputError on an empty matrix.
DetectorResult origin_distance_scores(const NormalizedMatrix& matrix);

/// Score = mean Euclidean distance to all other rows. O(N^2) by design;
/// exact, no neighborhood parameter. Throws InsufficientDataError when
/// N < 2.
DetectorResult average_distance_scores(const NormalizedMatrix& matrix);

/// One round of masking-aware removal: stats and normalization are
/// recomputed on the survivors, the top ceil(r * N_i) by origin distance
/// are removed, and the round's result is recorded. Lesser outliers that
/// were masked by more extreme ones surface in later rounds.
struct UnmaskingRound {
    DetectorResult result;      // scored over that round's survivors
    std::vector<std::string> removed; // ids removed at the end of the round
};

struct UnmaskingResult {
    std::vector<UnmaskingRound> rounds;
    bool exhausted = false;     // corpus ran out before `rounds` completed
    std::string warning;
};

/// rounds >= 1; r in (0, 1]. Returns a partial result with a warning when
/// removal would leave fewer than 2 records before all rounds complete.
UnmaskingResult iterative_unmasking(const Corpus& corpus, double r, std::size_t rounds);

/// Euclidean distance between two equal-length rows.
double euclidean_distance(std::span<const double> a, std::span<const double> b);

} // namespace querysieve
