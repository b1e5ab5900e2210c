#include "querysieve/sql_lint.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "querysieve/log.hpp"

namespace querysieve {

const char* to_string(SqlFindingCode code) {
    switch (code) {
        case SqlFindingCode::InequalityJoin: return "INEQUALITY_JOIN";
        case SqlFindingCode::MissingJoinPredicate: return "MISSING_JOIN_PREDICATE";
        case SqlFindingCode::FunctionOnColumnInWhere: return "FUNCTION_ON_COLUMN_IN_WHERE";
        case SqlFindingCode::NotInOrNotExists: return "NOT_IN_OR_NOT_EXISTS";
        case SqlFindingCode::DerivedTable: return "DERIVED_TABLE";
        case SqlFindingCode::AnalyticFunction: return "ANALYTIC_FUNCTION";
    }
    return "UNKNOWN";
}

FindingSeverity severity_of(SqlFindingCode code) {
    return code == SqlFindingCode::AnalyticFunction ? FindingSeverity::Info
                                                    : FindingSeverity::Warning;
}

namespace {

struct Token {
    enum class Kind { Ident, Number, String, Op, LParen, RParen, Comma, Semi, Dot, Other };
    Kind kind;
    std::string text; // uppercased for idents/ops
    std::size_t begin = 0;
    std::size_t end = 0;
};

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '#';
}

std::string to_upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

// Comments and string literal contents never produce tokens, so the
// heuristics cannot match inside them.
std::vector<Token> tokenize(const std::string& sql) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    const std::size_t n = sql.size();
    while (i < n) {
        char c = sql[i];
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        if (c == '-' && i + 1 < n && sql[i + 1] == '-') {
            while (i < n && sql[i] != '\n') ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && sql[i + 1] == '*') {
            i += 2;
            while (i + 1 < n && !(sql[i] == '*' && sql[i + 1] == '/')) ++i;
            i = std::min(n, i + 2);
            continue;
        }
        std::size_t start = i;
        if (c == '\'') {
            ++i;
            while (i < n) {
                if (sql[i] == '\'' && i + 1 < n && sql[i + 1] == '\'') { i += 2; continue; }
                if (sql[i] == '\'') { ++i; break; }
                ++i;
            }
            tokens.push_back({Token::Kind::String, "", start, i});
            continue;
        }
        if (c == '"') {
            ++i;
            while (i < n && sql[i] != '"') ++i;
            if (i < n) ++i;
            tokens.push_back(
                {Token::Kind::Ident, to_upper(sql.substr(start + 1, i - start - 2)), start, i});
            continue;
        }
        if (ident_start(c)) {
            while (i < n && ident_char(sql[i])) ++i;
            tokens.push_back({Token::Kind::Ident, to_upper(sql.substr(start, i - start)), start, i});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < n && (std::isdigit(static_cast<unsigned char>(sql[i])) || sql[i] == '.'))
                ++i;
            if (i < n && (sql[i] == 'e' || sql[i] == 'E')) {
                ++i;
                if (i < n && (sql[i] == '+' || sql[i] == '-')) ++i;
                while (i < n && std::isdigit(static_cast<unsigned char>(sql[i]))) ++i;
            }
            tokens.push_back({Token::Kind::Number, sql.substr(start, i - start), start, i});
            continue;
        }
        auto two = i + 1 < n ? sql.substr(i, 2) : std::string();
        if (two == "<>" || two == "!=" || two == "<=" || two == ">=" || two == "||") {
            tokens.push_back({Token::Kind::Op, two, i, i + 2});
            i += 2;
            continue;
        }
        Token::Kind kind = Token::Kind::Other;
        switch (c) {
            case '(': kind = Token::Kind::LParen; break;
            case ')': kind = Token::Kind::RParen; break;
            case ',': kind = Token::Kind::Comma; break;
            case ';': kind = Token::Kind::Semi; break;
            case '.': kind = Token::Kind::Dot; break;
            case '=': case '<': case '>': case '+': case '-': case '*': case '/': case '%':
                kind = Token::Kind::Op;
                break;
            default: break;
        }
        tokens.push_back({kind, std::string(1, c), i, i + 1});
        ++i;
    }
    return tokens;
}

const std::unordered_set<std::string>& keywords() {
    static const std::unordered_set<std::string> kw = {
        "SELECT", "FROM", "WHERE", "GROUP", "ORDER", "HAVING", "UNION", "ALL", "DISTINCT",
        "AND", "OR", "NOT", "IN", "EXISTS", "IS", "NULL", "LIKE", "BETWEEN", "CASE", "WHEN",
        "THEN", "ELSE", "END", "JOIN", "INNER", "LEFT", "RIGHT", "FULL", "OUTER", "CROSS",
        "ON", "AS", "BY", "ASC", "DESC", "INSERT", "UPDATE", "DELETE", "SET", "VALUES",
        "INTO", "LIMIT", "OFFSET", "OVER", "PARTITION", "WITH", "QUALIFY", "TOP", "EXCEPT",
        "INTERSECT", "MINUS", "USING",
    };
    return kw;
}

bool is_keyword(const Token& t) {
    return t.kind == Token::Kind::Ident && keywords().contains(t.text);
}

bool is_ident(const Token& t, const char* text) {
    return t.kind == Token::Kind::Ident && t.text == text;
}

// Nesting depth at each token: a paren pair and everything around it sit
// at the outer depth, its contents one deeper.
std::vector<int> compute_depths(const std::vector<Token>& tokens) {
    std::vector<int> depth(tokens.size(), 0);
    int d = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i].kind == Token::Kind::RParen && d > 0) --d;
        depth[i] = d;
        if (tokens[i].kind == Token::Kind::LParen) ++d;
    }
    return depth;
}

std::size_t match_paren(const std::vector<Token>& tokens, std::size_t lparen) {
    int d = 0;
    for (std::size_t i = lparen; i < tokens.size(); ++i) {
        if (tokens[i].kind == Token::Kind::LParen) ++d;
        else if (tokens[i].kind == Token::Kind::RParen && --d == 0) return i;
    }
    return tokens.size();
}

bool is_clause_terminator(const Token& t) {
    if (t.kind == Token::Kind::Semi) return true;
    if (t.kind != Token::Kind::Ident) return false;
    static const std::unordered_set<std::string> stops = {
        "WHERE", "GROUP", "ORDER", "HAVING", "UNION", "EXCEPT", "INTERSECT", "MINUS", "QUALIFY"};
    return stops.contains(t.text);
}

// End (exclusive) of the clause starting after `start`, staying at the
// given depth.
std::size_t clause_end(const std::vector<Token>& tokens, const std::vector<int>& depths,
                       std::size_t start, int depth) {
    for (std::size_t i = start; i < tokens.size(); ++i) {
        if (depths[i] < depth) return i;
        if (depths[i] == depth && is_clause_terminator(tokens[i])) return i;
    }
    return tokens.size();
}

struct Analyzer {
    const std::string& sql;
    const std::vector<Token> tokens;
    const std::vector<int> depths;
    std::set<std::pair<int, std::size_t>> seen;
    std::vector<SqlFinding> findings;

    explicit Analyzer(const std::string& text)
        : sql(text), tokens(tokenize(text)), depths(compute_depths(tokens)) {}

    void add(SqlFindingCode code, std::size_t begin, std::size_t end) {
        if (!seen.insert({static_cast<int>(code), begin}).second) return;
        findings.push_back({code, sql.substr(begin, end - begin), begin});
    }

    bool comparison_op(const Token& t) const {
        if (t.kind != Token::Kind::Op) return false;
        return t.text == "=" || t.text == "<>" || t.text == "!=" || t.text == "<" ||
               t.text == ">" || t.text == "<=" || t.text == ">=";
    }

    bool inequality_only_op(const Token& t) const {
        return t.kind == Token::Kind::Op &&
               (t.text == "<>" || t.text == "!=" || t.text == "<" || t.text == ">");
    }

    // A join ON clause whose comparisons are exclusively <>, !=, <, >.
    void scan_inequality_joins() {
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (!is_ident(tokens[i], "JOIN")) continue;
            int d = depths[i];
            std::size_t on = tokens.size();
            for (std::size_t j = i + 1; j < tokens.size(); ++j) {
                if (depths[j] < d) break;
                if (depths[j] != d) continue;
                if (is_ident(tokens[j], "ON")) { on = j; break; }
                if (is_clause_terminator(tokens[j]) || is_ident(tokens[j], "JOIN")) break;
            }
            if (on == tokens.size()) continue;

            std::size_t end = on + 1;
            for (; end < tokens.size(); ++end) {
                if (depths[end] < d) break;
                if (depths[end] != d) continue;
                const auto& t = tokens[end];
                if (is_clause_terminator(t) || is_ident(t, "JOIN") || is_ident(t, "INNER") ||
                    is_ident(t, "LEFT") || is_ident(t, "RIGHT") || is_ident(t, "FULL") ||
                    is_ident(t, "CROSS"))
                    break;
            }

            bool any_equality = false;
            std::size_t first_ineq = tokens.size();
            for (std::size_t j = on + 1; j < end; ++j) {
                if (depths[j] != d || !comparison_op(tokens[j])) continue;
                if (inequality_only_op(tokens[j])) {
                    if (first_ineq == tokens.size()) first_ineq = j;
                } else {
                    any_equality = true;
                }
            }
            if (any_equality || first_ineq == tokens.size()) continue;

            auto operand = [&](const Token& t) {
                return (t.kind == Token::Kind::Ident && !is_keyword(t)) ||
                       t.kind == Token::Kind::Dot || t.kind == Token::Kind::Number ||
                       t.kind == Token::Kind::String;
            };
            std::size_t lo = first_ineq;
            while (lo > on + 1 && operand(tokens[lo - 1])) --lo;
            std::size_t hi = first_ineq;
            while (hi + 1 < end && operand(tokens[hi + 1])) ++hi;
            add(SqlFindingCode::InequalityJoin, tokens[lo].begin, tokens[hi].end);
        }
    }

    // FROM clauses: derived tables at this level, and comma lists lacking
    // a join predicate in their WHERE clause.
    void scan_from_clauses() {
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (!is_ident(tokens[i], "FROM")) continue;
            int d = depths[i];
            std::size_t end = clause_end(tokens, depths, i + 1, d);
            if (end == i + 1) continue;

            bool has_join = false;
            std::vector<std::size_t> commas;
            for (std::size_t j = i + 1; j < end; ++j) {
                if (depths[j] != d) continue;
                if (tokens[j].kind == Token::Kind::LParen && j + 1 < tokens.size() &&
                    is_ident(tokens[j + 1], "SELECT")) {
                    add(SqlFindingCode::DerivedTable, tokens[j].begin, tokens[j + 1].end);
                }
                if (is_ident(tokens[j], "JOIN")) has_join = true;
                if (tokens[j].kind == Token::Kind::Comma) commas.push_back(j);
            }
            if (has_join || commas.empty()) continue;

            // Aliases: the trailing identifier of each comma-separated item.
            std::vector<std::string> aliases;
            std::size_t item_start = i + 1;
            auto close_item = [&](std::size_t item_end) {
                for (std::size_t j = item_end; j-- > item_start;) {
                    if (depths[j] == d && tokens[j].kind == Token::Kind::Ident &&
                        !is_keyword(tokens[j])) {
                        aliases.push_back(tokens[j].text);
                        return;
                    }
                    if (j == item_start) break;
                }
            };
            for (auto comma : commas) {
                close_item(comma);
                item_start = comma + 1;
            }
            close_item(end);
            if (aliases.size() < 2) continue;

            bool joined = false;
            if (end < tokens.size() && is_ident(tokens[end], "WHERE") && depths[end] == d) {
                std::size_t wend = clause_end(tokens, depths, end + 1, d);
                joined = where_has_alias_equality(end + 1, wend, aliases);
            }
            if (!joined) {
                // Evidence: the comma-separated table list itself.
                add(SqlFindingCode::MissingJoinPredicate, tokens[i + 1].begin,
                    tokens[end - 1].end);
            }
        }
    }

    bool where_has_alias_equality(std::size_t begin, std::size_t end,
                                  const std::vector<std::string>& aliases) const {
        auto known = [&](const std::string& q) {
            return std::find(aliases.begin(), aliases.end(), q) != aliases.end();
        };
        for (std::size_t j = begin; j < end; ++j) {
            if (tokens[j].kind != Token::Kind::Op || tokens[j].text != "=") continue;
            if (j < begin + 3 || j + 3 >= end) continue;
            const auto& lq = tokens[j - 3];
            const auto& ld = tokens[j - 2];
            const auto& lc = tokens[j - 1];
            const auto& rq = tokens[j + 1];
            const auto& rd = tokens[j + 2];
            const auto& rc = tokens[j + 3];
            bool left_ref = lq.kind == Token::Kind::Ident && !is_keyword(lq) &&
                            ld.kind == Token::Kind::Dot && lc.kind == Token::Kind::Ident;
            bool right_ref = rq.kind == Token::Kind::Ident && !is_keyword(rq) &&
                             rd.kind == Token::Kind::Dot && rc.kind == Token::Kind::Ident;
            if (left_ref && right_ref && lq.text != rq.text && known(lq.text) && known(rq.text)) {
                return true;
            }
        }
        return false;
    }

    // Function call wrapping a column reference on the left side of a
    // WHERE predicate.
    void scan_function_on_column() {
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (!is_ident(tokens[i], "WHERE")) continue;
            int d = depths[i];
            std::size_t end = clause_end(tokens, depths, i + 1, d);
            for (std::size_t j = i + 1; j < end; ++j) {
                const auto& t = tokens[j];
                if (t.kind != Token::Kind::Ident || is_keyword(t)) continue;
                if (j + 1 >= tokens.size() || tokens[j + 1].kind != Token::Kind::LParen) continue;

                bool at_predicate_start =
                    j == i + 1 || tokens[j - 1].kind == Token::Kind::LParen ||
                    is_ident(tokens[j - 1], "AND") || is_ident(tokens[j - 1], "OR") ||
                    is_ident(tokens[j - 1], "NOT");
                if (!at_predicate_start) continue;

                std::size_t close = match_paren(tokens, j + 1);
                if (close >= tokens.size()) continue;

                bool has_column = false;
                for (std::size_t a = j + 2; a < close && !has_column; ++a) {
                    const auto& candidate = tokens[a];
                    if (candidate.kind != Token::Kind::Ident || is_keyword(candidate)) continue;
                    bool qualified = a + 2 < close && tokens[a + 1].kind == Token::Kind::Dot &&
                                     tokens[a + 2].kind == Token::Kind::Ident;
                    bool call = a + 1 < tokens.size() && tokens[a + 1].kind == Token::Kind::LParen;
                    if (qualified || !call) has_column = true;
                }
                if (!has_column) continue;

                if (close + 1 >= tokens.size()) continue;
                const auto& after = tokens[close + 1];
                bool predicate_op = comparison_op(after) || is_ident(after, "IN") ||
                                    is_ident(after, "LIKE") || is_ident(after, "BETWEEN") ||
                                    is_ident(after, "IS");
                if (!predicate_op) continue;

                add(SqlFindingCode::FunctionOnColumnInWhere, t.begin, tokens[close].end);
            }
        }
    }

    void scan_not_in_not_exists() {
        for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
            if (!is_ident(tokens[i], "NOT")) continue;
            if (is_ident(tokens[i + 1], "IN") || is_ident(tokens[i + 1], "EXISTS")) {
                add(SqlFindingCode::NotInOrNotExists, tokens[i].begin, tokens[i + 1].end);
            }
        }
    }

    // OVER ( ... ) after a call: reported informationally.
    void scan_analytic_functions() {
        for (std::size_t i = 1; i + 1 < tokens.size(); ++i) {
            if (!is_ident(tokens[i], "OVER")) continue;
            if (tokens[i + 1].kind != Token::Kind::LParen) continue;
            if (tokens[i - 1].kind != Token::Kind::RParen) continue;
            std::size_t close = match_paren(tokens, i + 1);
            std::size_t end = close < tokens.size() ? tokens[close].end : tokens[i + 1].end;
            add(SqlFindingCode::AnalyticFunction, tokens[i].begin, end);
        }
    }
};

} // namespace

std::vector<SqlFinding> analyze_sql(const std::string& sql) {
    if (sql.find_first_not_of(" \t\r\n") == std::string::npos) {
        log_warn("analyze_sql: empty input, no findings");
        return {};
    }
    Analyzer analyzer(sql);
    analyzer.scan_inequality_joins();
    analyzer.scan_from_clauses();
    analyzer.scan_function_on_column();
    analyzer.scan_not_in_not_exists();
    analyzer.scan_analytic_functions();

    auto findings = std::move(analyzer.findings);
    std::sort(findings.begin(), findings.end(), [](const SqlFinding& a, const SqlFinding& b) {
        if (a.position != b.position) return a.position < b.position;
        return static_cast<int>(a.code) < static_cast<int>(b.code);
    });
    return findings;
}

std::string findings_to_json(const std::vector<SqlFinding>& findings) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& f : findings) {
        arr.push_back({
            {"code", to_string(f.code)},
            {"severity", severity_of(f.code) == FindingSeverity::Info ? "info" : "warning"},
            {"evidence", f.evidence},
            {"position", f.position},
        });
    }
    return arr.dump();
}

} // namespace querysieve
