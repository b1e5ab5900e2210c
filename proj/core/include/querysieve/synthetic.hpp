#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "querysieve/corpus.hpp"

namespace querysieve {

/// A feature vector planted verbatim `count` times.
struct PlantedGroup {
    std::vector<double> features;
    std::size_t count = 1;
};

struct SyntheticCorpus {
    Corpus corpus;
    /// Ground-truth sidecar: ids of the planted records, in append order.
    std::vector<std::string> planted_ids;
};

/// Deterministic synthetic corpus: `n_inliers` records drawn per-feature
/// from a normal distribution centered at `baseline` with scale `spread`
/// (clamped at 0, costs are non-negative), then the planted groups
/// appended verbatim. Same arguments -> byte-identical corpus.
///
/// `spread` fixes the feature count. `baseline` defaults to 100 per
/// feature; feature names default to cpu_cost/io_cost/memory/rows_impacted
/// when there are four features, else feature_<i>.
SyntheticCorpus generate_synthetic(std::size_t n_inliers,
                                   const std::vector<PlantedGroup>& planted,
                                   const std::vector<double>& spread,
                                   std::uint64_t seed,
                                   const std::vector<double>& baseline = {},
                                   const std::vector<std::string>& feature_names = {});

} // namespace querysieve
