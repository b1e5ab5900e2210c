#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "querysieve/corpus.hpp"

namespace querysieve {

/// Loads a corpus from UTF-8 CSV ("," delimiter, '"' quoting, mandatory
/// header). The header must contain `id_column` and every schema feature;
/// extra columns are ignored. Row numbers in errors are 1-based over data
/// rows.
Corpus load_csv(std::istream& source, const FeatureSchema& schema,
                const std::string& id_column,
                const std::optional<std::string>& sql_column = std::nullopt);

/// Loads a corpus from JSON-lines: one object per line with keys "id",
/// optional "sql", and one key per schema feature. Unknown keys are
/// ignored so vendor exports load unmodified.
Corpus load_jsonl(std::istream& source, const FeatureSchema& schema);

/// Writes `id,<features...>[,sql]` CSV. Feature values use the shortest
/// representation that round-trips, so load_csv(write_csv(c)) == c.
void write_csv(const Corpus& corpus, std::ostream& out, bool include_sql = true);

/// JSON-lines twin of write_csv.
void write_jsonl(const Corpus& corpus, std::ostream& out);

/// Header row of a CSV file (for column discovery before a full load).
std::vector<std::string> read_csv_header(const std::string& path);

/// Convenience file wrappers; throw IoError when the path is unusable.
Corpus load_csv_file(const std::string& path, const FeatureSchema& schema,
                     const std::string& id_column,
                     const std::optional<std::string>& sql_column = std::nullopt);
Corpus load_jsonl_file(const std::string& path, const FeatureSchema& schema);
void write_csv_file(const Corpus& corpus, const std::string& path, bool include_sql = true);

} // namespace querysieve
