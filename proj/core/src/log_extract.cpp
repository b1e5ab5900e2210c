#include "querysieve/log_extract.hpp"

#include <fstream>
#include <regex>
#include <unordered_map>

#include <json.hpp>

#include "internal_util.hpp"
#include "querysieve/errors.hpp"
#include "querysieve/log.hpp"

namespace querysieve {

namespace {

bool is_blank(const std::string& s) {
    return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

std::vector<std::string> split_segments(const std::string& text, const std::regex& delimiter) {
    std::vector<std::string> segments;
    auto begin = std::sregex_iterator(text.begin(), text.end(), delimiter);
    auto end = std::sregex_iterator();
    std::size_t last = 0;
    for (auto it = begin; it != end; ++it) {
        auto pos = static_cast<std::size_t>(it->position());
        segments.push_back(text.substr(last, pos - last));
        last = pos + it->length();
        // Zero-width delimiter match: step past one char so we make progress.
        if (it->length() == 0) ++last;
        if (last > text.size()) break;
    }
    if (last <= text.size()) segments.push_back(text.substr(last));
    std::erase_if(segments, is_blank);
    return segments;
}

} // namespace

LogExtractResult extract_from_log(const std::string& log_text,
                                  const std::vector<ExtractionRule>& rules,
                                  const std::string& record_delimiter,
                                  const FeatureSchema& schema) {
    // Validate rules against the schema before touching the text.
    std::unordered_map<std::string, std::vector<const ExtractionRule*>> by_feature;
    for (const auto& rule : rules) {
        if (!schema.index_of(rule.feature_name)) {
            throw SchemaError("extraction rule references unknown feature: " + rule.feature_name);
        }
        by_feature[rule.feature_name].push_back(&rule);
    }
    for (const auto& name : schema.names()) {
        if (!by_feature.contains(name)) {
            throw SchemaError("no extraction rule covers feature: " + name);
        }
    }

    std::vector<std::regex> compiled;
    compiled.reserve(rules.size());
    for (const auto& rule : rules) {
        std::regex re;
        try {
            re = std::regex(rule.pattern);
        } catch (const std::regex_error& e) {
            throw ArgumentError("invalid pattern for " + rule.feature_name + ": " + e.what());
        }
        if (re.mark_count() != 1) {
            throw ArgumentError("pattern for " + rule.feature_name +
                                " must contain exactly one capture group");
        }
        compiled.push_back(std::move(re));
    }

    std::regex delim;
    try {
        delim = std::regex(record_delimiter);
    } catch (const std::regex_error& e) {
        throw ArgumentError(std::string("invalid record delimiter: ") + e.what());
    }

    auto segments = split_segments(log_text, delim);
    if (segments.empty()) {
        throw EmptyInputError("log contains no segments");
    }

    LogExtractResult out;
    std::vector<QueryRecord> records;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        const auto& segment = segments[s];
        std::vector<double> values(schema.size(), 0.0);
        std::vector<bool> have(schema.size(), false);
        std::string missing;

        for (std::size_t f = 0; f < schema.size() && missing.empty(); ++f) {
            const auto& name = schema.name(f);
            bool required_somewhere = false;
            for (const auto* rule : by_feature[name]) {
                required_somewhere = required_somewhere || rule->required;
                auto rule_pos = static_cast<std::size_t>(rule - rules.data());
                std::smatch m;
                if (std::regex_search(segment, m, compiled[rule_pos])) {
                    auto value = detail::parse_double_strict(m[1].str());
                    if (value && *value >= 0.0) {
                        values[f] = *value;
                        have[f] = true;
                        break; // first match per rule wins
                    }
                }
            }
            if (!have[f] && required_somewhere) missing = name;
        }

        if (!missing.empty()) {
            out.skipped.push_back({s, missing});
            log_warn("log segment " + std::to_string(s) + " skipped: feature '" + missing +
                     "' not found");
            continue;
        }
        QueryRecord rec;
        rec.id = "seg_" + std::to_string(s + 1);
        rec.features = std::move(values);
        records.push_back(std::move(rec));
    }
    out.corpus = Corpus(schema, std::move(records));
    return out;
}

LogRulesConfig load_log_rules(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open rules file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("rules file " + path + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("delimiter") || !doc.contains("rules")) {
        throw ConfigError("rules file must hold {\"delimiter\": ..., \"rules\": [...]}");
    }
    LogRulesConfig config;
    config.delimiter = doc["delimiter"].get<std::string>();
    for (const auto& r : doc["rules"]) {
        ExtractionRule rule;
        rule.feature_name = r.at("feature").get<std::string>();
        rule.pattern = r.at("pattern").get<std::string>();
        rule.required = r.value("required", true);
        config.rules.push_back(std::move(rule));
    }
    return config;
}

} // namespace querysieve
