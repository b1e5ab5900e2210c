#include <doctest.h>

#include <cmath>

#include "querysieve/errors.hpp"
#include "querysieve/stats.hpp"
#include "test_support.hpp"

using namespace querysieve;

namespace {

Corpus column_corpus(const std::vector<double>& values) {
    std::vector<QueryRecord> records;
    for (std::size_t i = 0; i < values.size(); ++i) {
        records.push_back({"q" + std::to_string(i), {}, {values[i]}});
    }
    return Corpus(FeatureSchema({"f"}), std::move(records));
}

} // namespace

TEST_CASE("quartiles interpolate at p*(n-1)") {
    auto stats = compute_stats(column_corpus({1, 2, 3, 4, 5}));
    CHECK(stats.at(0).median == 3.0);
    CHECK(stats.at(0).q1 == 2.0);
    CHECK(stats.at(0).q3 == 4.0);
    CHECK(stats.at(0).iqr == 2.0);
    CHECK(!stats.at(0).constant);
}

TEST_CASE("quartile values frozen against a reference quantile routine") {
    // Expected values computed with an external linear-interpolation
    // quantile implementation and frozen here.
    auto s1 = compute_stats(column_corpus({0, 0, 0, 10})).at(0);
    CHECK(s1.median == 0.0);
    CHECK(s1.q1 == 0.0);
    CHECK(s1.q3 == 2.5);
    CHECK(s1.iqr == 2.5);
    CHECK(!s1.constant);
    CHECK(s1.fallback_scale == 1.0); // MAD is 0, falls back to 1

    auto s2 = compute_stats(column_corpus({3, 1, 4, 1, 5, 9, 2, 6})).at(0);
    CHECK(s2.q1 == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(s2.median == doctest::Approx(3.5).epsilon(1e-15));
    CHECK(s2.q3 == doctest::Approx(5.25).epsilon(1e-15));
    CHECK(s2.fallback_scale == doctest::Approx(2.9651999999999998).epsilon(1e-15));

    auto s3 = compute_stats(column_corpus({2.5, 1.5, 0.5, 3.5, 10.0, 2.0})).at(0);
    CHECK(s3.q1 == doctest::Approx(1.625).epsilon(1e-15));
    CHECK(s3.median == doctest::Approx(2.25).epsilon(1e-15));
    CHECK(s3.q3 == doctest::Approx(3.25).epsilon(1e-15));
}

TEST_CASE("constant feature is flagged with zero iqr") {
    auto s = compute_stats(column_corpus({7, 7, 7})).at(0);
    CHECK(s.median == 7.0);
    CHECK(s.iqr == 0.0);
    CHECK(s.constant);
}

TEST_CASE("compute_stats rejects an empty corpus") {
    Corpus empty(FeatureSchema({"f"}), {});
    CHECK_THROWS_AS(compute_stats(empty), EmptyInputError);
}

TEST_CASE("normalize applies (x - median) / iqr") {
    auto corpus = column_corpus({1, 2, 3, 4, 5});
    auto matrix = normalize(corpus, compute_stats(corpus));
    CHECK(matrix.at(0, 0) == -1.0);
    CHECK(matrix.at(1, 0) == -0.5);
    CHECK(matrix.at(2, 0) == 0.0);
    CHECK(matrix.at(3, 0) == 0.5);
    CHECK(matrix.at(4, 0) == 1.0);
}

TEST_CASE("constant feature normalizes to a zero column") {
    auto corpus = column_corpus({7, 7, 7});
    auto matrix = normalize(corpus, compute_stats(corpus));
    for (std::size_t r = 0; r < 3; ++r) CHECK(matrix.at(r, 0) == 0.0);
}

TEST_CASE("zero-iqr non-constant feature falls back to scaled MAD") {
    auto corpus = column_corpus({5, 5, 5, 5, 5, 100});
    auto stats = compute_stats(corpus);
    CHECK(stats.at(0).iqr == 0.0);
    CHECK(!stats.at(0).constant);
    auto matrix = normalize(corpus, stats);
    CHECK(matrix.at(0, 0) == 0.0);       // at the median
    CHECK(matrix.at(5, 0) == 95.0);      // (100 - 5) / fallback 1 (MAD = 0)
    for (std::size_t r = 0; r < 6; ++r) CHECK(std::isfinite(matrix.at(r, 0)));
}

TEST_CASE("normalize rejects stats from a different schema") {
    auto corpus = column_corpus({1, 2, 3});
    auto other = test_support::random_corpus(5, 2, 1);
    CHECK_THROWS_AS(normalize(corpus, compute_stats(other)), SchemaError);
}

TEST_CASE("normalized columns have median 0 and IQR 1") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        auto n = 10 + rng.uniform_index(500);
        auto corpus = test_support::random_corpus(n, 4, seed + 1000);
        auto matrix = normalize(corpus, compute_stats(corpus));
        for (std::size_t f = 0; f < 4; ++f) {
            std::vector<double> column;
            for (std::size_t r = 0; r < matrix.rows(); ++r) column.push_back(matrix.at(r, f));
            std::sort(column.begin(), column.end());
            CHECK(std::abs(quantile_sorted(column, 0.5)) < 1e-12);
            double iqr = quantile_sorted(column, 0.75) - quantile_sorted(column, 0.25);
            CHECK(std::abs(iqr - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("normalization is monotone per column") {
    auto corpus = test_support::random_corpus(200, 1, 5);
    auto stats = compute_stats(corpus);
    auto matrix = normalize(corpus, stats);
    for (std::size_t a = 0; a < corpus.size(); ++a) {
        for (std::size_t b = a + 1; b < corpus.size(); ++b) {
            double xa = corpus.record(a).features[0];
            double xb = corpus.record(b).features[0];
            if (xa < xb) CHECK(matrix.at(a, 0) < matrix.at(b, 0));
            if (xa > xb) CHECK(matrix.at(a, 0) > matrix.at(b, 0));
        }
    }
}

TEST_CASE("denormalize recovers raw values") {
    auto corpus = test_support::random_corpus(300, 4, 77);
    auto stats = compute_stats(corpus);
    auto matrix = normalize(corpus, stats);
    for (std::size_t r = 0; r < corpus.size(); ++r) {
        for (std::size_t f = 0; f < 4; ++f) {
            double raw = corpus.record(r).features[f];
            double back = denormalize_value(matrix.at(r, f), stats.at(f));
            CHECK(back == doctest::Approx(raw).epsilon(1e-9));
        }
    }
}

TEST_CASE("feature stats serialize to JSON") {
    auto corpus = column_corpus({1, 2, 3, 4, 5});
    auto payload = feature_stats_to_json(compute_stats(corpus));
    CHECK(payload.find("\"median\": 3.0") != std::string::npos);
    CHECK(payload.find("\"iqr\": 2.0") != std::string::npos);
}
