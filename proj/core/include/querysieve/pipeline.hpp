#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "querysieve/corpus.hpp"
#include "querysieve/detector.hpp"
#include "querysieve/distance.hpp"
#include "querysieve/ensemble.hpp"
#include "querysieve/kmeans.hpp"
#include "querysieve/lof.hpp"
#include "querysieve/sql_lint.hpp"
#include "querysieve/stats.hpp"

namespace querysieve {

enum class InputFormat { Csv, Jsonl, Log };

const char* to_string(InputFormat format);
InputFormat input_format_from_string(const std::string& s);

/// Full pipeline configuration. Defaults: the three default detectors at
/// a shared 1% fraction, K = 10 clusters, LOF k = 10, union combining,
/// one unmasking round.
struct RunConfig {
    std::string input_path;
    InputFormat format = InputFormat::Csv;
    std::vector<std::string> features;
    std::string id_column = "id";
    std::string sql_column;    // empty = use "sql" when the input has it
    std::string rules_path;    // extraction rules, log format only

    std::vector<std::string> detectors = default_pipeline_members();
    bool with_lof = false;

    double top = 0.01;
    std::optional<double> top_origin;
    std::optional<double> top_average;
    std::optional<double> top_cluster;
    std::optional<double> top_lof;

    std::size_t k_clusters = 10;
    std::size_t lof_k = 10;
    CombineMode combine = CombineMode::Union;
    std::uint64_t seed = 0;
    std::size_t rounds = 1;
    double band_width = 50.0;

    std::string out_dir; // not embedded in reports

    double fraction_for(const std::string& detector) const;
};

/// Reads a JSON config file holding the same keys as the CLI flags.
/// Unknown keys are rejected with ConfigError.
RunConfig load_run_config(const std::string& path);

/// Range checks that need no corpus (fractions, rounds, detector names).
/// Throws ConfigError.
void validate_config(const RunConfig& config);

/// Checks that need the loaded corpus (k vs N). Throws
/// InsufficientDataError.
void validate_config_against_corpus(const RunConfig& config, const Corpus& corpus);

/// One flagged record in the final report.
struct FlaggedRecord {
    std::string id;
    std::vector<double> features;
    std::vector<double> normalized;
    std::map<std::string, double> scores;      // per detector
    std::map<std::string, std::size_t> ranks;  // 1-based rank per detector
    std::size_t method_count = 0;
    std::optional<std::vector<SqlFinding>> sql_findings; // absent when no SQL text
};

/// Self-contained run output: config + seed embedded so every number can
/// be re-derived.
struct OutlierReport {
    RunConfig config;
    std::size_t n_records = 0;
    FeatureStats stats;
    std::vector<DetectorResult> detector_results; // post-selection
    std::optional<BandHistogram> bands_origin;
    std::optional<BandHistogram> bands_average;
    std::optional<ClusterModel> clusters;
    std::optional<UnmaskingResult> unmasking;     // rounds > 1 only
    EnsembleReport ensemble;
    std::vector<FlaggedRecord> flagged;           // corpus order
};

/// Loads the corpus per `config` (csv/jsonl/log).
Corpus load_corpus(const RunConfig& config);

/// Runs ingest -> stats -> normalize -> detectors -> ensemble -> annotate
/// on an already-loaded corpus. Pure: no files touched.
OutlierReport run_pipeline(const RunConfig& config, const Corpus& corpus);

/// load_corpus + run_pipeline.
OutlierReport run_pipeline(const RunConfig& config);

/// Canonical report bytes. Deterministic: identical (input bytes, config,
/// seed) produce identical strings.
std::string report_to_json_string(const OutlierReport& report);

/// Writes bands_origin.csv, bands_avgdist.csv, clusters.csv and
/// count_table.csv into out_dir (atomically, temp + rename).
void emit_plot_data(const OutlierReport& report, const std::string& out_dir);

/// report.json + emit_plot_data.
void write_report_files(const OutlierReport& report, const std::string& out_dir);

/// Reproducibility audit: re-runs the pipeline from the config embedded
/// in a report.json payload and diffs the regenerated report against it.
struct VerifyResult {
    bool ok = false;
    std::vector<std::string> mismatches; // JSON pointer-ish paths
};
VerifyResult verify_report(const std::string& report_json,
                           const std::optional<std::string>& input_override = std::nullopt);

} // namespace querysieve
