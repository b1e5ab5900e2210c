#pragma once

#include <string>
#include <vector>

#include "querysieve/corpus.hpp"

namespace querysieve {

/// One extraction rule: a regex with exactly one numeric capture group,
/// applied per log segment. First match wins. Optional rules default the
/// feature to 0 when they never match; required rules skip the segment.
struct ExtractionRule {
    std::string feature_name;
    std::string pattern;
    bool required = true;
};

/// Segment that produced no record, with the reason.
struct SkippedSegment {
    std::size_t segment_index = 0; // 0-based position in the split order
    std::string missing_feature;
};

struct LogExtractResult {
    Corpus corpus;
    std::vector<SkippedSegment> skipped;
};

/// Splits `log_text` into per-job segments at every `record_delimiter`
/// regex match and applies the rules to each segment. Segment ids are
/// seg_<n> in split order. Throws EmptyInputError when no non-blank
/// segment exists and SchemaError when a rule names an unknown feature
/// or a schema feature has no rule.
LogExtractResult extract_from_log(const std::string& log_text,
                                  const std::vector<ExtractionRule>& rules,
                                  const std::string& record_delimiter,
                                  const FeatureSchema& schema);

/// Rule-file loader. JSON: {"delimiter": "...", "rules": [{"feature": ...,
/// "pattern": ..., "required": bool}, ...]}.
struct LogRulesConfig {
    std::string delimiter;
    std::vector<ExtractionRule> rules;
};
LogRulesConfig load_log_rules(const std::string& path);

} // namespace querysieve
