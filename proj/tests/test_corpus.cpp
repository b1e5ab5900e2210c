#include <doctest.h>

#include <sstream>

#include "querysieve/corpus.hpp"
#include "querysieve/corpus_io.hpp"
#include "querysieve/errors.hpp"
#include "querysieve/log_extract.hpp"
#include "querysieve/synthetic.hpp"
#include "test_support.hpp"

using namespace querysieve;

TEST_CASE("schema rejects empty, blank and duplicate names") {
    CHECK_THROWS_AS(FeatureSchema({}), SchemaError);
    CHECK_THROWS_AS(FeatureSchema({"a", ""}), SchemaError);
    CHECK_THROWS_AS(FeatureSchema({"a", "a"}), SchemaError);
    FeatureSchema schema({"cpu", "io"});
    CHECK(schema.index_of("io") == 1);
    CHECK(!schema.index_of("mem"));
}

TEST_CASE("corpus validates ids and feature vectors") {
    FeatureSchema schema({"cpu"});
    CHECK_THROWS_AS(Corpus(schema, {{"a", {}, {1.0}}, {"a", {}, {2.0}}}), DuplicateIdError);
    CHECK_THROWS_AS(Corpus(schema, {{"a", {}, {1.0, 2.0}}}), ArgumentError);
    CHECK_THROWS_AS(Corpus(schema, {{"a", {}, {-1.0}}}), ArgumentError);
    CHECK_THROWS_AS(Corpus(schema, {{"a", {}, {std::nan("")}}}), ArgumentError);
}

TEST_CASE("load_csv maps header/row content to records") {
    FeatureSchema schema({"cpu", "io", "mem", "rows"});
    std::istringstream in("id,cpu,io,mem,rows\nq1,1.0,2.0,3.0,4.0\n");
    auto corpus = load_csv(in, schema, "id");
    REQUIRE(corpus.size() == 1);
    CHECK(corpus.record(0).id == "q1");
    CHECK(corpus.record(0).features == std::vector<double>{1.0, 2.0, 3.0, 4.0});
}

TEST_CASE("load_csv header-only input yields an empty corpus") {
    FeatureSchema schema({"cpu", "io", "mem", "rows"});
    std::istringstream in("id,cpu,io,mem,rows\n");
    CHECK(load_csv(in, schema, "id").size() == 0);
}

TEST_CASE("load_csv errors: bad cell, missing column, duplicate id") {
    FeatureSchema schema({"cpu", "io", "mem", "rows"});
    {
        std::istringstream in("id,cpu,io,mem,rows\nq1,1.0,x,3.0,4.0\n");
        try {
            load_csv(in, schema, "id");
            FAIL("expected RowError");
        } catch (const RowError& e) {
            CHECK(e.row() == 1);
            CHECK(std::string(e.what()).find("io") != std::string::npos);
        }
    }
    {
        std::istringstream in("id,cpu,io,mem\nq1,1,2,3\n");
        CHECK_THROWS_WITH_AS(load_csv(in, schema, "id"), "missing column: rows", SchemaError);
    }
    {
        std::istringstream in("id,cpu,io,mem,rows\nq1,1,2,3,4\nq1,5,6,7,8\n");
        CHECK_THROWS_AS(load_csv(in, schema, "id"), DuplicateIdError);
    }
    {
        std::istringstream in("id,cpu,io,mem,rows\nq1,1,2,-3,4\n");
        CHECK_THROWS_AS(load_csv(in, schema, "id"), RowError);
    }
}

TEST_CASE("load_csv honors quoting in the sql column") {
    FeatureSchema schema({"cpu"});
    std::istringstream in("id,cpu,sql\nq1,1,\"SELECT \"\"a\"\", b\nFROM t\"\n");
    auto corpus = load_csv(in, schema, "id", std::string("sql"));
    REQUIRE(corpus.size() == 1);
    CHECK(corpus.record(0).sql_text == "SELECT \"a\", b\nFROM t");
}

TEST_CASE("load_jsonl maps objects to records and tolerates unknown keys") {
    FeatureSchema schema({"cpu", "io", "mem", "rows"});
    std::istringstream in(
        R"({"id":"q1","cpu":1,"io":2,"mem":3,"rows":4})" "\n"
        R"({"id":"q2","cpu":5,"io":6,"mem":7,"rows":8,"vendor_tag":"x"})" "\n");
    auto corpus = load_jsonl(in, schema);
    REQUIRE(corpus.size() == 2);
    CHECK(corpus.record(0).features == std::vector<double>{1, 2, 3, 4});
    CHECK(corpus.record(1).features == std::vector<double>{5, 6, 7, 8});
}

TEST_CASE("load_jsonl errors carry line numbers and feature names") {
    FeatureSchema schema({"cpu", "io"});
    {
        std::istringstream in("{\"id\":\"q1\",\"cpu\":1,\"io\":2}\nnot json\n");
        try {
            load_jsonl(in, schema);
            FAIL("expected RowError");
        } catch (const RowError& e) {
            CHECK(e.row() == 2);
        }
    }
    {
        std::istringstream in(R"({"id":"q1","cpu":1})" "\n");
        CHECK_THROWS_WITH_AS(load_jsonl(in, schema), "row 1: missing feature: io", RowError);
    }
}

TEST_CASE("csv and jsonl of equivalent content load equal corpora") {
    auto corpus = test_support::random_corpus(50, 4, 11);
    std::ostringstream csv, jsonl;
    write_csv(corpus, csv);
    write_jsonl(corpus, jsonl);
    std::istringstream csv_in(csv.str()), jsonl_in(jsonl.str());
    auto from_csv = load_csv(csv_in, corpus.schema(), "id");
    auto from_jsonl = load_jsonl(jsonl_in, corpus.schema());
    CHECK(from_csv == from_jsonl);
}

TEST_CASE("csv round-trip preserves ids, order and full-precision values") {
    auto corpus = test_support::random_corpus(100, 4, 23);
    std::ostringstream out;
    write_csv(corpus, out);
    std::istringstream in(out.str());
    auto reloaded = load_csv(in, corpus.schema(), "id");
    CHECK(reloaded == corpus);
}

TEST_CASE("extract_from_log pulls features out of matched segments") {
    FeatureSchema schema({"cpu", "rows"});
    std::vector<ExtractionRule> rules = {
        {"cpu", R"(cpu time: ([0-9.]+))", true},
        {"rows", R"(rows: ([0-9]+))", true},
    };
    auto result = extract_from_log("JOB A ... cpu time: 12.5 ... rows: 100", rules, "JOB ", schema);
    REQUIRE(result.corpus.size() == 1);
    CHECK(result.corpus.record(0).features == std::vector<double>{12.5, 100});
    CHECK(result.skipped.empty());
}

TEST_CASE("extract_from_log reports segments missing a required feature") {
    FeatureSchema schema({"cpu", "rows"});
    std::vector<ExtractionRule> rules = {
        {"cpu", R"(cpu time: ([0-9.]+))", true},
        {"rows", R"(rows: ([0-9]+))", true},
    };
    std::string log = "JOB A cpu time: 1.5 rows: 10\nJOB B cpu time: 2.5\nJOB C cpu time: 3 rows: 30";
    auto result = extract_from_log(log, rules, "JOB ", schema);
    CHECK(result.corpus.size() == 2);
    REQUIRE(result.skipped.size() == 1);
    CHECK(result.skipped[0].missing_feature == "rows");
    // order preserved for the matched segments
    CHECK(result.corpus.record(0).features[0] == 1.5);
    CHECK(result.corpus.record(1).features[0] == 3.0);
}

TEST_CASE("extract_from_log optional rules default to zero") {
    FeatureSchema schema({"cpu", "rows"});
    std::vector<ExtractionRule> rules = {
        {"cpu", R"(cpu time: ([0-9.]+))", true},
        {"rows", R"(rows: ([0-9]+))", false},
    };
    auto result = extract_from_log("JOB A cpu time: 4.5", rules, "JOB ", schema);
    REQUIRE(result.corpus.size() == 1);
    CHECK(result.corpus.record(0).features == std::vector<double>{4.5, 0.0});
}

TEST_CASE("extract_from_log error paths") {
    FeatureSchema schema({"cpu"});
    std::vector<ExtractionRule> rules = {{"cpu", R"(cpu: ([0-9]+))", true}};
    CHECK_THROWS_AS(extract_from_log("", rules, "JOB", schema), EmptyInputError);
    std::vector<ExtractionRule> bad_feature = {{"gpu", R"(gpu: ([0-9]+))", true}};
    CHECK_THROWS_AS(extract_from_log("x", bad_feature, "JOB", schema), SchemaError);
    std::vector<ExtractionRule> two_groups = {{"cpu", R"(cpu: ([0-9]+) ([0-9]+))", true}};
    CHECK_THROWS_AS(extract_from_log("x", two_groups, "JOB", schema), ArgumentError);
    // every schema feature needs at least one rule
    FeatureSchema wider({"cpu", "rows"});
    CHECK_THROWS_AS(extract_from_log("x", rules, "JOB", wider), SchemaError);
}

TEST_CASE("generate_synthetic with no inliers uses no randomness") {
    auto synthetic = generate_synthetic(0, {{{100, 100, 100, 100}, 2}}, {10, 10, 10, 10}, 123);
    REQUIRE(synthetic.corpus.size() == 2);
    CHECK(synthetic.corpus.record(0).features == synthetic.corpus.record(1).features);
    CHECK(synthetic.planted_ids.size() == 2);
}

TEST_CASE("generate_synthetic is a pure function of its arguments") {
    auto a = generate_synthetic(200, {{{900, 900, 900, 900}, 3}}, {10, 10, 10, 10}, 42);
    auto b = generate_synthetic(200, {{{900, 900, 900, 900}, 3}}, {10, 10, 10, 10}, 42);
    CHECK(a.corpus == b.corpus);
    CHECK(a.planted_ids == b.planted_ids);

    std::ostringstream csv_a, csv_b;
    write_csv(a.corpus, csv_a);
    write_csv(b.corpus, csv_b);
    CHECK(csv_a.str() == csv_b.str()); // byte-identical

    auto c = generate_synthetic(200, {{{900, 900, 900, 900}, 3}}, {10, 10, 10, 10}, 43);
    CHECK(a.corpus != c.corpus);
}

TEST_CASE("generate_synthetic sidecar marks exactly the planted records") {
    auto synthetic = generate_synthetic(1000, {{{5000, 5000, 5000, 5000}, 10}}, {10, 10, 10, 10}, 7);
    CHECK(synthetic.corpus.size() == 1010);
    CHECK(synthetic.planted_ids.size() == 10);
    for (const auto& id : synthetic.planted_ids) {
        bool found = false;
        for (const auto& rec : synthetic.corpus.records()) {
            if (rec.id == id) {
                found = true;
                CHECK(rec.features == std::vector<double>{5000, 5000, 5000, 5000});
            }
        }
        CHECK(found);
    }
    CHECK_THROWS_AS(generate_synthetic(1, {}, {}, 0), ArgumentError);
}
