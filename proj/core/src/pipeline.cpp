#include "querysieve/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "internal_util.hpp"
#include "querysieve/corpus_io.hpp"
#include "querysieve/errors.hpp"
#include "querysieve/log.hpp"
#include "querysieve/log_extract.hpp"

namespace querysieve {

using nlohmann::json;

const char* to_string(InputFormat format) {
    switch (format) {
        case InputFormat::Csv: return "csv";
        case InputFormat::Jsonl: return "jsonl";
        case InputFormat::Log: return "log";
    }
    return "csv";
}

InputFormat input_format_from_string(const std::string& s) {
    if (s == "csv") return InputFormat::Csv;
    if (s == "jsonl") return InputFormat::Jsonl;
    if (s == "log") return InputFormat::Log;
    throw ConfigError("format must be csv, jsonl or log, got '" + s + "'");
}

double RunConfig::fraction_for(const std::string& detector) const {
    if (detector == kOriginDistanceName && top_origin) return *top_origin;
    if (detector == kAverageDistanceName && top_average) return *top_average;
    if (detector == kClusterSmallestName && top_cluster) return *top_cluster;
    if (detector == kLofName && top_lof) return *top_lof;
    return top;
}

namespace {

const std::set<std::string>& known_config_keys() {
    static const std::set<std::string> keys = {
        "input", "format", "features", "id_column", "sql_column", "rules", "detectors",
        "with_lof", "top", "top_origin", "top_average", "top_cluster", "top_lof", "k",
        "lof_k", "combine", "seed", "rounds", "band_width", "out",
    };
    return keys;
}

const std::set<std::string>& known_detectors() {
    static const std::set<std::string> names = {kOriginDistanceName, kAverageDistanceName,
                                                kClusterSmallestName, kLofName};
    return names;
}

void check_fraction(const char* name, double value, bool open_top) {
    bool ok = value > 0.0 && (open_top ? value < 1.0 : value <= 1.0);
    if (!ok) {
        throw ConfigError(std::string(name) + " must lie in (0, 1" + (open_top ? ")" : "]") +
                          ", got " + detail::format_double(value));
    }
}

} // namespace

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");

    for (const auto& [key, value] : doc.items()) {
        if (!known_config_keys().contains(key)) {
            throw ConfigError("unknown config key: " + key);
        }
    }

    RunConfig config;
    try {
        if (doc.contains("input")) config.input_path = doc["input"].get<std::string>();
        if (doc.contains("format"))
            config.format = input_format_from_string(doc["format"].get<std::string>());
        if (doc.contains("features"))
            config.features = doc["features"].get<std::vector<std::string>>();
        if (doc.contains("id_column")) config.id_column = doc["id_column"].get<std::string>();
        if (doc.contains("sql_column")) config.sql_column = doc["sql_column"].get<std::string>();
        if (doc.contains("rules")) config.rules_path = doc["rules"].get<std::string>();
        if (doc.contains("detectors"))
            config.detectors = doc["detectors"].get<std::vector<std::string>>();
        if (doc.contains("with_lof")) config.with_lof = doc["with_lof"].get<bool>();
        if (doc.contains("top")) config.top = doc["top"].get<double>();
        if (doc.contains("top_origin")) config.top_origin = doc["top_origin"].get<double>();
        if (doc.contains("top_average")) config.top_average = doc["top_average"].get<double>();
        if (doc.contains("top_cluster")) config.top_cluster = doc["top_cluster"].get<double>();
        if (doc.contains("top_lof")) config.top_lof = doc["top_lof"].get<double>();
        if (doc.contains("k")) config.k_clusters = doc["k"].get<std::size_t>();
        if (doc.contains("lof_k")) config.lof_k = doc["lof_k"].get<std::size_t>();
        if (doc.contains("combine"))
            config.combine = combine_mode_from_string(doc["combine"].get<std::string>());
        if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("rounds")) config.rounds = doc["rounds"].get<std::size_t>();
        if (doc.contains("band_width")) config.band_width = doc["band_width"].get<double>();
        if (doc.contains("out")) config.out_dir = doc["out"].get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    return config;
}

void validate_config(const RunConfig& config) {
    if (config.features.empty()) throw ConfigError("at least one feature name is required");
    if (config.detectors.size() < 2) {
        throw ConfigError("the ensemble needs at least 2 detectors");
    }
    std::set<std::string> seen;
    for (const auto& d : config.detectors) {
        if (!known_detectors().contains(d)) throw ConfigError("unknown detector: " + d);
        if (!seen.insert(d).second) throw ConfigError("detector listed twice: " + d);
    }
    check_fraction("top", config.top, false);
    if (config.top_origin) check_fraction("top_origin", *config.top_origin, false);
    if (config.top_average) check_fraction("top_average", *config.top_average, false);
    if (config.top_cluster) check_fraction("top_cluster", *config.top_cluster, true);
    if (config.top_lof) check_fraction("top_lof", *config.top_lof, false);
    if (config.fraction_for(kClusterSmallestName) >= 1.0) {
        throw ConfigError("cluster fraction must lie in (0, 1)");
    }
    if (config.rounds < 1) throw ConfigError("rounds must be >= 1");
    if (config.k_clusters < 1) throw ConfigError("k must be >= 1");
    if (config.lof_k < 1) throw ConfigError("lof_k must be >= 1");
    if (!(config.band_width > 0.0)) throw ConfigError("band_width must be > 0");
    if (config.format == InputFormat::Log && config.rules_path.empty()) {
        throw ConfigError("log format requires a rules file (--rules)");
    }
}

void validate_config_against_corpus(const RunConfig& config, const Corpus& corpus) {
    const std::size_t n = corpus.size();
    auto wants = [&](const char* name) {
        return std::find(config.detectors.begin(), config.detectors.end(), name) !=
               config.detectors.end();
    };
    if (n == 0) throw EmptyInputError("corpus is empty");
    if (wants(kAverageDistanceName) && n < 2) {
        throw InsufficientDataError("average-distance scoring needs at least 2 records, got " +
                                    std::to_string(n));
    }
    if (wants(kClusterSmallestName) && config.k_clusters > n) {
        throw InsufficientDataError("k = " + std::to_string(config.k_clusters) +
                                    " clusters exceeds corpus size " + std::to_string(n));
    }
    if (wants(kLofName) && config.lof_k + 1 > n) {
        throw InsufficientDataError("lof_k = " + std::to_string(config.lof_k) +
                                    " needs at least " + std::to_string(config.lof_k + 1) +
                                    " records, got " + std::to_string(n));
    }
}

Corpus load_corpus(const RunConfig& config) {
    FeatureSchema schema(config.features);
    switch (config.format) {
        case InputFormat::Csv: {
            std::optional<std::string> sql_column;
            if (!config.sql_column.empty()) {
                sql_column = config.sql_column;
            } else {
                auto header = read_csv_header(config.input_path);
                if (std::find(header.begin(), header.end(), "sql") != header.end()) {
                    sql_column = "sql";
                }
            }
            return load_csv_file(config.input_path, schema, config.id_column, sql_column);
        }
        case InputFormat::Jsonl:
            return load_jsonl_file(config.input_path, schema);
        case InputFormat::Log: {
            std::ifstream in(config.input_path, std::ios::binary);
            if (!in) throw IoError("cannot open for reading: " + config.input_path);
            std::ostringstream text;
            text << in.rdbuf();
            auto rules = load_log_rules(config.rules_path);
            auto extracted = extract_from_log(text.str(), rules.rules, rules.delimiter, schema);
            if (!extracted.skipped.empty()) {
                log_warn(std::to_string(extracted.skipped.size()) +
                         " log segment(s) skipped for missing required features");
            }
            return extracted.corpus;
        }
    }
    throw ConfigError("unreachable input format");
}

namespace {

std::map<std::string, std::size_t> rank_map(const std::vector<std::string>& ranking) {
    std::map<std::string, std::size_t> ranks;
    for (std::size_t i = 0; i < ranking.size(); ++i) ranks[ranking[i]] = i + 1;
    return ranks;
}

} // namespace

OutlierReport run_pipeline(const RunConfig& config, const Corpus& corpus) {
    validate_config(config);

    auto detectors = config.detectors;
    if (config.with_lof &&
        std::find(detectors.begin(), detectors.end(), kLofName) == detectors.end()) {
        detectors.push_back(kLofName);
    }
    RunConfig effective = config;
    effective.detectors = detectors;
    validate_config_against_corpus(effective, corpus);

    OutlierReport report;
    report.config = effective;
    report.n_records = corpus.size();
    report.stats = compute_stats(corpus);
    auto matrix = normalize(corpus, report.stats);

    std::unordered_map<std::string, std::map<std::string, std::size_t>> ranks_by_detector;
    std::unordered_map<std::string, std::vector<double>> scores_by_detector;

    for (const auto& name : detectors) {
        DetectorResult selected;
        if (name == kOriginDistanceName) {
            auto scored = origin_distance_scores(matrix);
            report.bands_origin = band_histogram(scored, config.band_width);
            double fraction = config.fraction_for(name);
            if (config.rounds > 1) {
                auto unmasking = iterative_unmasking(corpus, fraction, config.rounds);
                selected = top_fraction(scored, fraction);
                // The member's flagged set is the union of every round's
                // removals, ordered round by round then by rank.
                std::vector<std::string> flagged;
                std::unordered_set<std::string> seen;
                for (const auto& round : unmasking.rounds) {
                    for (const auto& id : round.removed) {
                        if (seen.insert(id).second) flagged.push_back(id);
                    }
                }
                selected.outliers = std::move(flagged);
                selected.params["rounds"] = std::to_string(config.rounds);
                report.unmasking = std::move(unmasking);
            } else {
                selected = top_fraction(scored, fraction);
            }
            ranks_by_detector[name] = rank_map(scored.outliers);
            scores_by_detector[name] = scored.scores;
        } else if (name == kAverageDistanceName) {
            auto scored = average_distance_scores(matrix);
            report.bands_average = band_histogram(scored, config.band_width);
            selected = top_fraction(scored, config.fraction_for(name));
            ranks_by_detector[name] = rank_map(scored.outliers);
            scores_by_detector[name] = scored.scores;
        } else if (name == kClusterSmallestName) {
            auto model = kmeans(matrix, config.k_clusters, config.seed);
            selected = refine_exact_fraction(model, matrix, config.fraction_for(name));
            ranks_by_detector[name] = rank_map(rank_descending(selected.record_ids, selected.scores));
            scores_by_detector[name] = selected.scores;
            report.clusters = std::move(model);
        } else if (name == kLofName) {
            auto [scored, diagnostics] = lof_scores(matrix, config.lof_k);
            selected = top_fraction(scored, config.fraction_for(name));
            ranks_by_detector[name] = rank_map(scored.outliers);
            scores_by_detector[name] = scored.scores;
            (void)diagnostics;
        } else {
            throw ConfigError("unknown detector: " + name);
        }
        report.detector_results.push_back(std::move(selected));
    }

    report.ensemble = combine(report.detector_results, config.combine);

    std::unordered_set<std::string> combined(report.ensemble.combined.begin(),
                                             report.ensemble.combined.end());
    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t r = 0; r < corpus.size(); ++r) position[corpus.record(r).id] = r;

    for (std::size_t r = 0; r < corpus.size(); ++r) {
        const auto& record = corpus.record(r);
        if (!combined.contains(record.id)) continue;
        FlaggedRecord flagged;
        flagged.id = record.id;
        flagged.features = record.features;
        auto row = matrix.row(r);
        flagged.normalized.assign(row.begin(), row.end());
        for (const auto& result : report.detector_results) {
            flagged.scores[result.detector_name] = scores_by_detector[result.detector_name][r];
            flagged.ranks[result.detector_name] = ranks_by_detector[result.detector_name][record.id];
        }
        flagged.method_count = report.ensemble.method_count.at(record.id);
        if (record.sql_text) flagged.sql_findings = analyze_sql(*record.sql_text);
        report.flagged.push_back(std::move(flagged));
    }
    return report;
}

OutlierReport run_pipeline(const RunConfig& config) {
    validate_config(config);
    return run_pipeline(config, load_corpus(config));
}

namespace {

json config_to_json(const RunConfig& config) {
    json j;
    j["input"] = config.input_path;
    j["format"] = to_string(config.format);
    j["features"] = config.features;
    j["id_column"] = config.id_column;
    j["sql_column"] = config.sql_column;
    j["rules"] = config.rules_path;
    j["detectors"] = config.detectors;
    j["with_lof"] = config.with_lof;
    j["top"] = config.top;
    if (config.top_origin) j["top_origin"] = *config.top_origin;
    if (config.top_average) j["top_average"] = *config.top_average;
    if (config.top_cluster) j["top_cluster"] = *config.top_cluster;
    if (config.top_lof) j["top_lof"] = *config.top_lof;
    j["k"] = config.k_clusters;
    j["lof_k"] = config.lof_k;
    j["combine"] = to_string(config.combine);
    j["seed"] = config.seed;
    j["rounds"] = config.rounds;
    j["band_width"] = config.band_width;
    // out_dir deliberately not embedded: reports stay byte-identical
    // wherever they are written.
    return j;
}

RunConfig config_from_json(const json& j) {
    RunConfig config;
    config.input_path = j.at("input").get<std::string>();
    config.format = input_format_from_string(j.at("format").get<std::string>());
    config.features = j.at("features").get<std::vector<std::string>>();
    config.id_column = j.at("id_column").get<std::string>();
    config.sql_column = j.at("sql_column").get<std::string>();
    config.rules_path = j.at("rules").get<std::string>();
    config.detectors = j.at("detectors").get<std::vector<std::string>>();
    config.with_lof = j.at("with_lof").get<bool>();
    config.top = j.at("top").get<double>();
    if (j.contains("top_origin")) config.top_origin = j["top_origin"].get<double>();
    if (j.contains("top_average")) config.top_average = j["top_average"].get<double>();
    if (j.contains("top_cluster")) config.top_cluster = j["top_cluster"].get<double>();
    if (j.contains("top_lof")) config.top_lof = j["top_lof"].get<double>();
    config.k_clusters = j.at("k").get<std::size_t>();
    config.lof_k = j.at("lof_k").get<std::size_t>();
    config.combine = combine_mode_from_string(j.at("combine").get<std::string>());
    config.seed = j.at("seed").get<std::uint64_t>();
    config.rounds = j.at("rounds").get<std::size_t>();
    config.band_width = j.at("band_width").get<double>();
    return config;
}

json bands_to_json(const BandHistogram& hist) {
    json bands = json::array();
    for (const auto& band : hist.bands) {
        bands.push_back({{"lower", band.lower}, {"upper", band.upper}, {"count", band.count}});
    }
    return json{{"band_width", hist.band_width}, {"bands", bands}, {"total", hist.total}};
}

json report_to_json(const OutlierReport& report) {
    json j;
    j["config"] = config_to_json(report.config);
    j["corpus"] = {{"n_records", report.n_records}};

    json stats = json::array();
    for (std::size_t f = 0; f < report.stats.size(); ++f) {
        const auto& s = report.stats.at(f);
        stats.push_back({
            {"feature", report.stats.schema.name(f)},
            {"median", s.median},
            {"q1", s.q1},
            {"q3", s.q3},
            {"iqr", s.iqr},
            {"fallback_scale", s.fallback_scale},
            {"constant", s.constant},
        });
    }
    j["feature_stats"] = stats;

    json detectors = json::array();
    for (const auto& result : report.detector_results) {
        detectors.push_back({
            {"name", result.detector_name},
            {"params", result.params},
            {"top_ids", result.outliers},
        });
    }
    j["detectors"] = detectors;

    json bands = json::object();
    if (report.bands_origin) bands[kOriginDistanceName] = bands_to_json(*report.bands_origin);
    if (report.bands_average) bands[kAverageDistanceName] = bands_to_json(*report.bands_average);
    j["bands"] = bands;

    if (report.clusters) {
        const auto& model = *report.clusters;
        json populations = json::array();
        for (const auto& [cluster, population] : cluster_population_report(model)) {
            populations.push_back({cluster, population});
        }
        j["clusters"] = {
            {"k", model.k},
            {"seed", model.seed},
            {"iterations_run", model.iterations_run},
            {"inertia", model.inertia},
            {"populations_ascending", populations},
        };
    }

    if (report.unmasking) {
        json rounds = json::array();
        for (std::size_t i = 0; i < report.unmasking->rounds.size(); ++i) {
            rounds.push_back({{"round", i + 1}, {"removed", report.unmasking->rounds[i].removed}});
        }
        j["unmasking"] = {
            {"rounds", rounds},
            {"exhausted", report.unmasking->exhausted},
            {"warning", report.unmasking->warning},
        };
    }

    json count_table = json::object();
    for (const auto& [methods, count] : report.ensemble.count_table) {
        count_table[std::to_string(methods)] = count;
    }
    std::size_t grand_total = 0;
    for (const auto& [methods, count] : report.ensemble.count_table) grand_total += count;
    json method_count = json::object();
    for (const auto& [id, count] : report.ensemble.method_count) method_count[id] = count;
    j["ensemble"] = {
        {"mode", to_string(report.ensemble.mode)},
        {"members", report.ensemble.member_detectors},
        {"combined", report.ensemble.combined},
        {"method_count", method_count},
        {"count_table", count_table},
        {"grand_total", grand_total},
    };

    json outliers = json::array();
    for (const auto& flagged : report.flagged) {
        json entry = {
            {"id", flagged.id},
            {"features", flagged.features},
            {"normalized", flagged.normalized},
            {"scores", flagged.scores},
            {"ranks", flagged.ranks},
            {"method_count", flagged.method_count},
        };
        if (flagged.sql_findings) {
            json arr = json::array();
            for (const auto& finding : *flagged.sql_findings) {
                arr.push_back({
                    {"code", to_string(finding.code)},
                    {"severity",
                     severity_of(finding.code) == FindingSeverity::Info ? "info" : "warning"},
                    {"evidence", finding.evidence},
                    {"position", finding.position},
                });
            }
            entry["sql_findings"] = arr;
        }
        outliers.push_back(std::move(entry));
    }
    j["outliers"] = outliers;
    return j;
}

void write_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path temp = target;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + temp.string());
        out << contents;
        if (!out.flush()) throw IoError("write failed: " + temp.string());
    }
    std::error_code ec;
    fs::rename(temp, target, ec);
    if (ec) throw IoError("cannot rename " + temp.string() + " to " + path + ": " + ec.message());
}

} // namespace

std::string report_to_json_string(const OutlierReport& report) {
    return report_to_json(report).dump(2) + "\n";
}

void emit_plot_data(const OutlierReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());
    fs::path dir(out_dir);

    if (report.bands_origin) {
        write_atomic((dir / "bands_origin.csv").string(), band_histogram_to_csv(*report.bands_origin));
    }
    if (report.bands_average) {
        write_atomic((dir / "bands_avgdist.csv").string(),
                     band_histogram_to_csv(*report.bands_average));
    }
    if (report.clusters) {
        write_atomic((dir / "clusters.csv").string(), cluster_report_to_csv(*report.clusters));
    }
    write_atomic((dir / "count_table.csv").string(), count_table_to_csv(report.ensemble));
}

void write_report_files(const OutlierReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());
    write_atomic((fs::path(out_dir) / "report.json").string(), report_to_json_string(report));
    emit_plot_data(report, out_dir);
}

namespace {

void diff_json(const json& expected, const json& actual, const std::string& path,
               std::vector<std::string>& out, std::size_t limit) {
    if (out.size() >= limit) return;
    if (expected == actual) return;
    if (expected.is_object() && actual.is_object()) {
        for (const auto& [key, value] : expected.items()) {
            if (!actual.contains(key)) {
                out.push_back(path + "/" + key + ": missing in regenerated report");
                if (out.size() >= limit) return;
            } else {
                diff_json(value, actual[key], path + "/" + key, out, limit);
            }
        }
        for (const auto& [key, value] : actual.items()) {
            if (!expected.contains(key)) {
                out.push_back(path + "/" + key + ": missing in original report");
                if (out.size() >= limit) return;
            }
        }
        return;
    }
    if (expected.is_array() && actual.is_array()) {
        if (expected.size() != actual.size()) {
            out.push_back(path + ": array size " + std::to_string(expected.size()) + " vs " +
                          std::to_string(actual.size()));
            return;
        }
        for (std::size_t i = 0; i < expected.size(); ++i) {
            diff_json(expected[i], actual[i], path + "/" + std::to_string(i), out, limit);
            if (out.size() >= limit) return;
        }
        return;
    }
    out.push_back(path + ": " + expected.dump() + " vs " + actual.dump());
}

} // namespace

VerifyResult verify_report(const std::string& report_json,
                           const std::optional<std::string>& input_override) {
    json original;
    try {
        original = json::parse(report_json);
    } catch (const json::exception& e) {
        throw IoError(std::string("report is not valid JSON: ") + e.what());
    }
    if (!original.is_object() || !original.contains("config")) {
        throw IoError("report has no embedded config");
    }

    RunConfig config = config_from_json(original["config"]);
    if (input_override) config.input_path = *input_override;

    auto regenerated = run_pipeline(config);
    json fresh = report_to_json(regenerated);
    if (input_override) {
        // The override changes the embedded input path by construction.
        fresh["config"]["input"] = original["config"]["input"];
    }

    VerifyResult result;
    diff_json(original, fresh, "", result.mismatches, 50);
    result.ok = result.mismatches.empty();
    return result;
}

} // namespace querysieve
