#include "querysieve/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "internal_util.hpp"
#include "querysieve/errors.hpp"

namespace querysieve {

std::vector<std::string> rank_descending(const std::vector<std::string>& ids,
                                         const std::vector<double>& scores) {
    std::vector<std::size_t> order(ids.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b]; // stable sort keeps ties in ascending position
    });
    std::vector<std::string> ranked;
    ranked.reserve(ids.size());
    for (auto i : order) ranked.push_back(ids[i]);
    return ranked;
}

std::size_t top_count(double r, std::size_t n) {
    if (!(r > 0.0) || r > 1.0) {
        throw ArgumentError("fraction must lie in (0, 1], got " + detail::format_double(r));
    }
    auto count = static_cast<std::size_t>(std::ceil(r * static_cast<double>(n)));
    return std::min(count, n);
}

DetectorResult top_fraction(const DetectorResult& result, double r) {
    std::size_t count = top_count(r, result.size());
    DetectorResult out = result;
    out.outliers.assign(result.outliers.begin(),
                        result.outliers.begin() + static_cast<std::ptrdiff_t>(count));
    out.params["top_fraction"] = detail::format_double(r);
    return out;
}

BandHistogram band_histogram(const DetectorResult& result, double band_width) {
    if (!(band_width > 0.0)) throw ArgumentError("band width must be > 0");

    double max_score = 0.0;
    for (double s : result.scores) max_score = std::max(max_score, s);
    auto last_band = static_cast<std::size_t>(max_score / band_width);

    BandHistogram hist;
    hist.band_width = band_width;
    hist.total = result.scores.size();
    hist.bands.resize(last_band + 1);
    for (std::size_t b = 0; b <= last_band; ++b) {
        hist.bands[b].lower = static_cast<double>(b) * band_width;
        hist.bands[b].upper = static_cast<double>(b + 1) * band_width;
    }
    for (double s : result.scores) {
        auto b = std::min(static_cast<std::size_t>(s / band_width), last_band);
        ++hist.bands[b].count;
    }
    return hist;
}

std::string band_histogram_to_csv(const BandHistogram& hist) {
    std::ostringstream out;
    out << "band_lower,band_upper,count\n";
    for (const auto& band : hist.bands) {
        out << detail::format_double(band.lower) << ',' << detail::format_double(band.upper) << ','
            << band.count << '\n';
    }
    return out.str();
}

std::string band_histogram_to_table(const BandHistogram& hist) {
    std::ostringstream out;
    out << "Distance Band\tNo. of Observation\n";
    for (std::size_t b = 0; b < hist.bands.size(); ++b) {
        const auto& band = hist.bands[b];
        if (b + 1 == hist.bands.size()) {
            out << detail::format_double(band.lower) << "+";
        } else {
            out << detail::format_double(band.lower) << "-" << detail::format_double(band.upper);
        }
        out << '\t' << band.count << '\n';
    }
    out << "Grand Total\t" << hist.total << '\n';
    return out.str();
}

} // namespace querysieve
