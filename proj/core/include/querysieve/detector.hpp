#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "querysieve/stats.hpp"

namespace querysieve {

/// Output of one detector over one corpus. `scores` is aligned to
/// `record_ids` (corpus order). `outliers` holds ids ranked by descending
/// score, ties broken by ascending record position; selection (top_fraction
/// or cluster membership) truncates it.
struct DetectorResult {
    std::string detector_name;
    std::vector<std::string> record_ids;
    std::vector<double> scores;
    std::vector<std::string> outliers;
    std::map<std::string, std::string> params;

    std::size_t size() const { return record_ids.size(); }
};

/// Builds the descending-score ranking (full, unselected) for a score
/// vector. Shared by every score-based detector.
std::vector<std::string> rank_descending(const std::vector<std::string>& ids,
                                         const std::vector<double>& scores);

/// Keeps the top ceil(r * N) of the ranking; scores untouched.
/// r must lie in (0, 1].
DetectorResult top_fraction(const DetectorResult& result, double r);

/// ceil(r * n) as used by every "top r%" selection.
std::size_t top_count(double r, std::size_t n);

/// Score histogram over half-open bands [k*w, (k+1)*w). The final band is
/// reported open-ended ("lower+") like the published distance tables.
struct BandHistogram {
    struct Band {
        double lower = 0.0;
        double upper = 0.0; // nominal upper edge; last band is open-ended
        std::size_t count = 0;
    };
    double band_width = 0.0;
    std::vector<Band> bands;
    std::size_t total = 0;
};

/// Counts scores per band. band_width must be > 0.
BandHistogram band_histogram(const DetectorResult& result, double band_width);

/// CSV lines `band_lower,band_upper,count` for plotting.
std::string band_histogram_to_csv(const BandHistogram& hist);

/// Paper-style table rows, final band rendered "lower+".
std::string band_histogram_to_table(const BandHistogram& hist);

} // namespace querysieve
