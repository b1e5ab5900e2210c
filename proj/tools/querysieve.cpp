#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "querysieve/corpus_io.hpp"
#include "querysieve/errors.hpp"
#include "querysieve/pipeline.hpp"
#include "querysieve/sql_lint.hpp"
#include "querysieve/synthetic.hpp"

namespace {

using namespace querysieve;

// Exit codes: 1 = I/O or parse failure, 2 = config validation failure,
// 3 = corpus too small for the requested parameters.
int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) != nullptr) return 2;
    if (dynamic_cast<const ArgumentError*>(&e) != nullptr) return 2;
    if (dynamic_cast<const EmptyInputError*>(&e) != nullptr) return 3;
    if (dynamic_cast<const InsufficientDataError*>(&e) != nullptr) return 3;
    return 1;
}

struct RunFlags {
    std::string config_path;
    std::string input;
    std::string format = "csv";
    std::vector<std::string> features;
    std::string id_column = "id";
    std::string sql_column;
    std::string rules;
    std::vector<std::string> detectors;
    bool with_lof = false;
    double top = 0.01;
    double top_origin = 0.0;
    double top_average = 0.0;
    double top_cluster = 0.0;
    double top_lof = 0.0;
    std::size_t k = 10;
    std::size_t lof_k = 10;
    std::string combine = "union";
    std::uint64_t seed = 0;
    std::size_t rounds = 1;
    double band_width = 50.0;
    std::string out;
};

void add_input_flags(CLI::App* cmd, RunFlags& flags) {
    cmd->add_option("--input", flags.input, "Input file path");
    cmd->add_option("--format", flags.format, "Input format: csv, jsonl or log")
        ->check(CLI::IsMember({"csv", "jsonl", "log"}));
    cmd->add_option("--features", flags.features, "Feature column names, in order")
        ->delimiter(',');
    cmd->add_option("--id-column", flags.id_column, "Id column name (csv)");
    cmd->add_option("--sql-column", flags.sql_column, "SQL text column name (csv)");
    cmd->add_option("--rules", flags.rules, "Extraction rules file (log format)");
}

// Config file first, explicit flags override.
RunConfig build_config(const CLI::App* cmd, const RunFlags& flags) {
    RunConfig config;
    if (!flags.config_path.empty()) config = load_run_config(flags.config_path);

    auto given = [&](const char* name) { return cmd->count(name) > 0; };
    if (given("--input")) config.input_path = flags.input;
    if (given("--format")) config.format = input_format_from_string(flags.format);
    if (given("--features")) config.features = flags.features;
    if (given("--id-column")) config.id_column = flags.id_column;
    if (given("--sql-column")) config.sql_column = flags.sql_column;
    if (given("--rules")) config.rules_path = flags.rules;
    if (given("--detectors")) config.detectors = flags.detectors;
    if (given("--with-lof")) config.with_lof = flags.with_lof;
    if (given("--top")) config.top = flags.top;
    if (given("--top-origin")) config.top_origin = flags.top_origin;
    if (given("--top-average")) config.top_average = flags.top_average;
    if (given("--top-cluster")) config.top_cluster = flags.top_cluster;
    if (given("--top-lof")) config.top_lof = flags.top_lof;
    if (given("--k")) config.k_clusters = flags.k;
    if (given("--lof-k")) config.lof_k = flags.lof_k;
    if (given("--combine")) config.combine = combine_mode_from_string(flags.combine);
    if (given("--seed")) config.seed = flags.seed;
    if (given("--rounds")) config.rounds = flags.rounds;
    if (given("--band-width")) config.band_width = flags.band_width;
    if (given("--out")) config.out_dir = flags.out;
    if (config.input_path.empty()) throw ConfigError("--input is required");
    return config;
}

int cmd_run(const CLI::App* cmd, const RunFlags& flags) {
    RunConfig config = build_config(cmd, flags);
    if (config.out_dir.empty()) throw ConfigError("--out is required");

    auto report = run_pipeline(config);
    write_report_files(report, config.out_dir);

    std::cout << "flagged " << report.ensemble.combined.size() << " of " << report.n_records
              << " records (" << to_string(report.ensemble.mode) << " of "
              << report.ensemble.member_detectors.size() << " detectors)\n"
              << "report: " << config.out_dir << "/report.json\n";
    return 0;
}

int cmd_stats(const CLI::App* cmd, const RunFlags& flags, const std::string& out_path) {
    RunConfig config = build_config(cmd, flags);
    auto corpus = load_corpus(config);
    auto stats = compute_stats(corpus);
    auto payload = feature_stats_to_json(stats) + "\n";
    if (out_path.empty()) {
        std::cout << payload;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw IoError("cannot open for writing: " + out_path);
        out << payload;
    }
    return 0;
}

int cmd_lint(const std::string& path, bool as_json) {
    std::string sql;
    if (path.empty() || path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        sql = buffer.str();
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open for reading: " + path);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        sql = buffer.str();
    }

    auto findings = analyze_sql(sql);
    if (as_json) {
        std::cout << findings_to_json(findings) << "\n";
    } else {
        for (const auto& f : findings) {
            std::cout << (severity_of(f.code) == FindingSeverity::Info ? "info" : "warning")
                      << "\t" << to_string(f.code) << "\t" << f.position << "\t" << f.evidence
                      << "\n";
        }
        if (findings.empty()) std::cout << "no findings\n";
    }
    return 0;
}

int cmd_verify(const std::string& report_path, const std::string& input_override) {
    std::ifstream in(report_path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + report_path);
    std::ostringstream buffer;
    buffer << in.rdbuf();

    std::optional<std::string> override_path;
    if (!input_override.empty()) override_path = input_override;
    auto result = verify_report(buffer.str(), override_path);
    if (result.ok) {
        std::cout << "verify: OK (report is re-derivable from its embedded config)\n";
        return 0;
    }
    std::cerr << "error: report does not match a recomputation:\n";
    for (const auto& m : result.mismatches) std::cerr << "  " << m << "\n";
    return 1;
}

struct SynthFlags {
    std::size_t inliers = 1000;
    std::vector<std::string> planted;
    std::vector<double> spread = {10.0, 10.0, 10.0, 10.0};
    std::vector<double> baseline;
    std::uint64_t seed = 0;
    std::string out;
    std::string labels;
};

// "v1,v2,...:count" -> one planted group.
PlantedGroup parse_planted(const std::string& text) {
    PlantedGroup group;
    std::string vec = text;
    auto colon = text.rfind(':');
    if (colon != std::string::npos) {
        group.count = static_cast<std::size_t>(std::stoull(text.substr(colon + 1)));
        vec = text.substr(0, colon);
    }
    std::istringstream in(vec);
    std::string part;
    while (std::getline(in, part, ',')) group.features.push_back(std::stod(part));
    if (group.features.empty()) throw ArgumentError("--planted needs at least one value");
    return group;
}

int cmd_synth(const SynthFlags& flags) {
    if (flags.out.empty()) throw ConfigError("--out is required");
    std::vector<PlantedGroup> planted;
    for (const auto& text : flags.planted) planted.push_back(parse_planted(text));

    auto synthetic =
        generate_synthetic(flags.inliers, planted, flags.spread, flags.seed, flags.baseline);
    write_csv_file(synthetic.corpus, flags.out);
    if (!flags.labels.empty()) {
        std::ofstream out(flags.labels, std::ios::binary);
        if (!out) throw IoError("cannot open for writing: " + flags.labels);
        for (const auto& id : synthetic.planted_ids) out << id << "\n";
    }
    std::cout << "wrote " << synthetic.corpus.size() << " records to " << flags.out << " ("
              << synthetic.planted_ids.size() << " planted)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"querysieve: outlier detection over query/ETL execution-metric corpora"};
    app.require_subcommand(1);

    RunFlags flags;
    std::string stats_out;
    std::string lint_path;
    bool lint_json = false;
    std::string verify_report_path;
    std::string verify_input;
    SynthFlags synth;

    auto* run = app.add_subcommand("run", "Run the full detection pipeline");
    run->add_option("--config", flags.config_path, "JSON config file (flags override it)");
    add_input_flags(run, flags);
    run->add_option("--detectors", flags.detectors,
                    "Detectors: origin_distance, average_distance, cluster_smallest, lof")
        ->delimiter(',');
    run->add_flag("--with-lof", flags.with_lof, "Opt LOF into the ensemble");
    run->add_option("--top", flags.top, "Outlier fraction per detector (default 0.01)");
    run->add_option("--top-origin", flags.top_origin, "Origin-distance fraction override");
    run->add_option("--top-average", flags.top_average, "Average-distance fraction override");
    run->add_option("--top-cluster", flags.top_cluster, "Cluster fraction override");
    run->add_option("--top-lof", flags.top_lof, "LOF fraction override");
    run->add_option("--k", flags.k, "Number of k-means clusters (default 10)");
    run->add_option("--lof-k", flags.lof_k, "LOF neighborhood size (default 10)");
    run->add_option("--combine", flags.combine, "union or intersection")
        ->check(CLI::IsMember({"union", "intersection"}));
    run->add_option("--seed", flags.seed, "RNG seed (k-means init)");
    run->add_option("--rounds", flags.rounds, "Masking-aware removal rounds (default 1)");
    run->add_option("--band-width", flags.band_width, "Histogram band width (default 50)");
    run->add_option("--out", flags.out, "Output directory");

    auto* stats = app.add_subcommand("stats", "Print robust per-feature stats as JSON");
    stats->add_option("--config", flags.config_path, "JSON config file (flags override it)");
    add_input_flags(stats, flags);
    stats->add_option("--out", stats_out, "Write JSON here instead of stdout");

    auto* lint = app.add_subcommand("lint", "Scan SQL for antipatterns");
    lint->add_option("file", lint_path, "SQL file ('-' or omitted = stdin)");
    lint->add_flag("--json", lint_json, "Emit findings as JSON");

    auto* verify = app.add_subcommand("verify", "Recompute a report from its embedded config and diff");
    verify->add_option("--report", verify_report_path, "report.json to audit")->required();
    verify->add_option("--input", verify_input, "Input path override (moved corpus file)");

    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus with planted outliers");
    synth_cmd->add_option("--inliers", synth.inliers, "Number of inlier records (default 1000)");
    synth_cmd->add_option("--planted", synth.planted,
                          "Planted vector 'v1,v2,...[:count]' (repeatable)");
    synth_cmd->add_option("--spread", synth.spread, "Per-feature scale (default 10,10,10,10)")
        ->delimiter(',');
    synth_cmd->add_option("--baseline", synth.baseline, "Per-feature center (default 100 each)")
        ->delimiter(',');
    synth_cmd->add_option("--seed", synth.seed, "RNG seed");
    synth_cmd->add_option("--out", synth.out, "Output CSV path");
    synth_cmd->add_option("--labels", synth.labels, "Write planted ids here (one per line)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run, flags);
        if (stats->parsed()) return cmd_stats(stats, flags, stats_out);
        if (lint->parsed()) return cmd_lint(lint_path, lint_json);
        if (verify->parsed()) return cmd_verify(verify_report_path, verify_input);
        if (synth_cmd->parsed()) return cmd_synth(synth);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
