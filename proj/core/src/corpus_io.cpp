#include "querysieve/corpus_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "internal_util.hpp"
#include "querysieve/errors.hpp"

namespace querysieve {

namespace {

// Reads one CSV record, honoring quoted fields ("" escapes a quote) and
// newlines inside quotes. Returns false at end of input.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    int c = in.get();
    if (c == EOF) return false;

    std::string field;
    bool in_quotes = false;
    bool any = false;
    while (c != EOF) {
        any = true;
        char ch = static_cast<char>(c);
        if (in_quotes) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"') {
            in_quotes = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (ch == '\n') {
            break;
        } else if (ch == '\r') {
            if (in.peek() == '\n') in.get();
            break;
        } else {
            field.push_back(ch);
        }
        c = in.get();
    }
    if (!any) return false;
    fields.push_back(std::move(field));
    return true;
}

std::string csv_quote(const std::string& field) {
    bool needs = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out += "\"";
    return out;
}

void strip_bom(std::string& s) {
    if (s.size() >= 3 && static_cast<unsigned char>(s[0]) == 0xEF &&
        static_cast<unsigned char>(s[1]) == 0xBB && static_cast<unsigned char>(s[2]) == 0xBF) {
        s.erase(0, 3);
    }
}

} // namespace

Corpus load_csv(std::istream& source, const FeatureSchema& schema,
                const std::string& id_column, const std::optional<std::string>& sql_column) {
    std::vector<std::string> header;
    if (!read_csv_record(source, header)) {
        throw SchemaError("CSV input has no header row");
    }
    if (!header.empty()) strip_bom(header[0]);

    auto find_column = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        return std::nullopt;
    };

    auto id_idx = find_column(id_column);
    if (!id_idx) throw SchemaError("missing column: " + id_column);

    std::vector<std::size_t> feature_idx(schema.size());
    for (std::size_t f = 0; f < schema.size(); ++f) {
        auto idx = find_column(schema.name(f));
        if (!idx) throw SchemaError("missing column: " + schema.name(f));
        feature_idx[f] = *idx;
    }

    std::optional<std::size_t> sql_idx;
    if (sql_column) {
        sql_idx = find_column(*sql_column);
        if (!sql_idx) throw SchemaError("missing column: " + *sql_column);
    }

    std::vector<QueryRecord> records;
    std::unordered_set<std::string> seen_ids;
    std::vector<std::string> fields;
    std::size_t row = 0;
    while (read_csv_record(source, fields)) {
        ++row;
        if (fields.size() == 1 && fields[0].empty()) continue; // blank line
        if (fields.size() < header.size()) {
            throw RowError(row, "expected " + std::to_string(header.size()) + " fields, got " +
                                    std::to_string(fields.size()));
        }
        QueryRecord rec;
        rec.id = fields[*id_idx];
        if (rec.id.empty()) throw RowError(row, "empty id");
        if (!seen_ids.insert(rec.id).second) {
            throw DuplicateIdError("duplicate record id: " + rec.id + " (row " +
                                   std::to_string(row) + ")");
        }
        rec.features.resize(schema.size());
        for (std::size_t f = 0; f < schema.size(); ++f) {
            auto value = detail::parse_double_strict(fields[feature_idx[f]]);
            if (!value) {
                throw RowError(row, "feature " + schema.name(f) + ": not a number: '" +
                                        fields[feature_idx[f]] + "'");
            }
            if (*value < 0.0) {
                throw RowError(row, "feature " + schema.name(f) + ": negative value " +
                                        detail::format_double(*value));
            }
            rec.features[f] = *value;
        }
        if (sql_idx) rec.sql_text = fields[*sql_idx];
        records.push_back(std::move(rec));
    }
    return Corpus(schema, std::move(records));
}

Corpus load_jsonl(std::istream& source, const FeatureSchema& schema) {
    using nlohmann::json;
    std::vector<QueryRecord> records;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        if (line_no == 1) strip_bom(line);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& e) {
            throw RowError(line_no, std::string("malformed JSON: ") + e.what());
        }
        if (!obj.is_object()) throw RowError(line_no, "line is not a JSON object");

        QueryRecord rec;
        if (!obj.contains("id")) throw RowError(line_no, "missing key: id");
        const auto& id = obj["id"];
        if (id.is_string()) rec.id = id.get<std::string>();
        else if (id.is_number_integer()) rec.id = std::to_string(id.get<long long>());
        else throw RowError(line_no, "id must be a string or integer");
        if (rec.id.empty()) throw RowError(line_no, "empty id");
        if (!seen_ids.insert(rec.id).second) {
            throw DuplicateIdError("duplicate record id: " + rec.id + " (line " +
                                   std::to_string(line_no) + ")");
        }

        if (obj.contains("sql")) {
            if (!obj["sql"].is_string()) throw RowError(line_no, "sql must be a string");
            rec.sql_text = obj["sql"].get<std::string>();
        }

        rec.features.resize(schema.size());
        for (std::size_t f = 0; f < schema.size(); ++f) {
            const auto& name = schema.name(f);
            if (!obj.contains(name)) throw RowError(line_no, "missing feature: " + name);
            const auto& v = obj[name];
            if (!v.is_number()) throw RowError(line_no, "feature " + name + ": not a number");
            double value = v.get<double>();
            if (!std::isfinite(value)) throw RowError(line_no, "feature " + name + ": not finite");
            if (value < 0.0) {
                throw RowError(line_no, "feature " + name + ": negative value " +
                                            detail::format_double(value));
            }
            rec.features[f] = value;
        }
        records.push_back(std::move(rec));
    }
    return Corpus(schema, std::move(records));
}

void write_csv(const Corpus& corpus, std::ostream& out, bool include_sql) {
    bool any_sql = false;
    for (const auto& r : corpus.records()) {
        if (r.sql_text) { any_sql = true; break; }
    }
    bool sql = include_sql && any_sql;

    out << "id";
    for (const auto& name : corpus.schema().names()) out << ',' << csv_quote(name);
    if (sql) out << ",sql";
    out << '\n';

    for (const auto& r : corpus.records()) {
        out << csv_quote(r.id);
        for (double v : r.features) out << ',' << detail::format_double(v);
        if (sql) out << ',' << csv_quote(r.sql_text.value_or(""));
        out << '\n';
    }
}

void write_jsonl(const Corpus& corpus, std::ostream& out) {
    using nlohmann::json;
    for (const auto& r : corpus.records()) {
        json obj;
        obj["id"] = r.id;
        for (std::size_t f = 0; f < corpus.schema().size(); ++f) {
            obj[corpus.schema().name(f)] = r.features[f];
        }
        if (r.sql_text) obj["sql"] = *r.sql_text;
        out << obj.dump() << '\n';
    }
}

namespace {
std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    return in;
}
} // namespace

std::vector<std::string> read_csv_header(const std::string& path) {
    auto in = open_input(path);
    std::vector<std::string> header;
    if (!read_csv_record(in, header)) {
        throw SchemaError("CSV input has no header row");
    }
    if (!header.empty()) strip_bom(header[0]);
    return header;
}

Corpus load_csv_file(const std::string& path, const FeatureSchema& schema,
                     const std::string& id_column, const std::optional<std::string>& sql_column) {
    auto in = open_input(path);
    return load_csv(in, schema, id_column, sql_column);
}

Corpus load_jsonl_file(const std::string& path, const FeatureSchema& schema) {
    auto in = open_input(path);
    return load_jsonl(in, schema);
}

void write_csv_file(const Corpus& corpus, const std::string& path, bool include_sql) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_csv(corpus, out, include_sql);
    if (!out.flush()) throw IoError("write failed: " + path);
}

} // namespace querysieve
