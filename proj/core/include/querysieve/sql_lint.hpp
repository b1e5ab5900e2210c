#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace querysieve {

/// Antipattern codes. The first five are warnings; ANALYTIC_FUNCTION is
/// informational (analytical-function usage is reported, not judged).
enum class SqlFindingCode {
    InequalityJoin,
    MissingJoinPredicate,
    FunctionOnColumnInWhere,
    NotInOrNotExists,
    DerivedTable,
    AnalyticFunction,
};

enum class FindingSeverity { Warning, Info };

const char* to_string(SqlFindingCode code);
FindingSeverity severity_of(SqlFindingCode code);

/// One finding. `evidence` is a verbatim substring of the analyzed SQL
/// starting at `position`.
struct SqlFinding {
    SqlFindingCode code = SqlFindingCode::DerivedTable;
    std::string evidence;
    std::size_t position = 0;

    bool operator==(const SqlFinding&) const = default;
};

/// Token-level, best-effort antipattern scan. Case-insensitive; string
/// literals and comments never match. Never throws, whatever the input
/// bytes; empty input yields no findings. Findings are position-sorted
/// and unique per (code, position).
std::vector<SqlFinding> analyze_sql(const std::string& sql);

/// Findings as a JSON array string (used by the lint subcommand and the
/// outlier report).
std::string findings_to_json(const std::vector<SqlFinding>& findings);

} // namespace querysieve
