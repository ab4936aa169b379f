#pragma once

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mlguard/csv.hpp"
#include "mlguard/lexer.hpp"
#include "mlguard/schema.hpp"
#include "mlguard/source.hpp"

namespace mlguard {

enum class ColumnKind { Numeric, Categorical, Unknown };
enum class Normalization { UnitRange, ZScore, None };

inline std::string_view column_kind_name(ColumnKind k) {
    switch (k) {
        case ColumnKind::Numeric: return "numeric";
        case ColumnKind::Categorical: return "categorical";
        case ColumnKind::Unknown: return "unknown";
    }
    return "?";
}

inline std::string_view normalization_name(Normalization n) {
    switch (n) {
        case Normalization::UnitRange: return "unit_range";
        case Normalization::ZScore: return "zscore";
        case Normalization::None: return "none";
    }
    return "?";
}

struct ColumnProfile {
    std::string name;
    ColumnKind inferred_kind = ColumnKind::Unknown;
    long long row_count = 0;
    long long missing_count = 0;
    long long distinct_count = 0;
    std::optional<double> min;
    std::optional<double> max;
    std::optional<double> mean;
    std::optional<double> std_dev;  // population standard deviation
    std::map<std::string, long long> value_counts;  // categorical only
    double entropy_bits = 0.0;
    Normalization normalization = Normalization::None;
    std::optional<bool> ordered;  // from schema, when one was supplied
};

struct DataProfile {
    std::string source;
    long long row_count = 0;
    std::vector<ColumnProfile> columns;
    std::optional<std::string> label_column;

    const ColumnProfile* find_column(std::string_view name) const {
        for (const auto& c : columns)
            if (c.name == name) return &c;
        return nullptr;
    }
};

// Shannon entropy in bits over counts normalized to probabilities;
// 0 * log 0 is taken as 0. At least one count must be positive.
inline double entropy(const std::vector<long long>& counts) {
    long long total = 0;
    for (long long c : counts) {
        if (c < 0) throw std::invalid_argument("entropy: negative count");
        total += c;
    }
    if (total == 0)
        throw std::invalid_argument("entropy: all counts are zero");
    double bits = 0.0;
    for (long long c : counts) {
        if (c == 0) continue;
        double p = static_cast<double>(c) / static_cast<double>(total);
        bits -= p * std::log2(p);
    }
    return bits;
}

// Total variation distance between two discrete distributions over the
// union of their categories; absent categories count as 0. Inputs must
// each sum to 1 within 1e-9.
inline double distribution_distance(const std::map<std::string, double>& p,
                                    const std::map<std::string, double>& q) {
    auto check = [](const std::map<std::string, double>& dist,
                    const char* which) {
        double sum = 0.0;
        for (const auto& [_, v] : dist) sum += v;
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument(
                std::string("distribution_distance: ") + which +
                " distribution does not sum to 1");
    };
    check(p, "first");
    check(q, "second");
    std::set<std::string> keys;
    for (const auto& [k, _] : p) keys.insert(k);
    for (const auto& [k, _] : q) keys.insert(k);
    double sum = 0.0;
    for (const auto& k : keys) {
        auto ip = p.find(k);
        auto iq = q.find(k);
        double pv = ip == p.end() ? 0.0 : ip->second;
        double qv = iq == q.end() ? 0.0 : iq->second;
        sum += std::abs(pv - qv);
    }
    return sum / 2.0;
}

// unit_range if the values already sit in [0, 1]; zscore if centered with
// unit spread (tolerance 0.1 on both); otherwise none. Requires a numeric
// column with at least two non-missing values.
inline Normalization detect_normalization(const ColumnProfile& col) {
    if (col.inferred_kind != ColumnKind::Numeric)
        throw std::invalid_argument("detect_normalization: column '" +
                                    col.name + "' is not numeric");
    if (col.row_count - col.missing_count < 2)
        throw std::invalid_argument(
            "detect_normalization: column '" + col.name +
            "' needs at least two non-missing values");
    if (!col.min || !col.max || !col.mean || !col.std_dev)
        throw std::invalid_argument("detect_normalization: column '" +
                                    col.name + "' lacks numeric statistics");
    if (*col.min >= 0.0 && *col.max <= 1.0) return Normalization::UnitRange;
    if (std::abs(*col.mean) <= 0.1 && std::abs(*col.std_dev - 1.0) <= 0.1)
        return Normalization::ZScore;
    return Normalization::None;
}

namespace detail {

// Missing markers: the empty cell and the literal NA.
inline bool is_missing_cell(std::string_view cell) {
    return cell.empty() || cell == "NA";
}

inline std::optional<double> parse_numeric_cell(std::string_view cell) {
    if (cell.empty()) return std::nullopt;
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) return std::nullopt;
    if (!std::isfinite(value)) return std::nullopt;
    return value;
}

}  // namespace detail

struct ProfileResult {
    DataProfile profile;
    std::vector<std::string> notes;  // schema gaps and similar findings
};

// Computes per-column statistics from a rectangular table. Kind inference:
// numeric iff every non-missing cell parses as a finite number; a supplied
// schema overrides inference. Columns that are entirely missing stay
// unknown and never feed numeric rules.
inline ProfileResult profile_table(const Table& table,
                                   const SchemaMeta* schema = nullptr,
                                   std::string source = "") {
    if (table.rows.empty() && table.header.empty())
        throw CsvError("empty input: no header row");
    ProfileResult result;
    DataProfile& profile = result.profile;
    profile.source = std::move(source);
    profile.row_count = static_cast<long long>(table.rows.size());

    for (std::size_t c = 0; c < table.header.size(); ++c) {
        ColumnProfile col;
        col.name = table.header[c];
        col.row_count = profile.row_count;

        const ColumnSchema* col_schema =
            schema ? schema->find(col.name) : nullptr;
        if (col_schema) col.ordered = col_schema->ordered;

        std::vector<std::string_view> present;
        for (const auto& row : table.rows) {
            std::string_view cell = row[c];
            if (detail::is_missing_cell(cell)) {
                ++col.missing_count;
            } else {
                present.push_back(cell);
            }
        }

        bool numeric = !present.empty();
        std::vector<double> numbers;
        numbers.reserve(present.size());
        for (std::string_view cell : present) {
            auto value = detail::parse_numeric_cell(cell);
            if (!value) {
                numeric = false;
                break;
            }
            numbers.push_back(*value);
        }
        if (col_schema && col_schema->kind) {
            if (*col_schema->kind == "categorical") {
                numeric = false;
            } else if (*col_schema->kind == "numeric" && !present.empty()) {
                if (!numeric)
                    result.notes.push_back(
                        "column " + col.name +
                        ": declared numeric but has non-numeric cells; they "
                        "are treated as missing");
                numeric = true;
                numbers.clear();
                std::vector<std::string_view> kept;
                for (std::string_view cell : present) {
                    auto value = detail::parse_numeric_cell(cell);
                    if (value) {
                        numbers.push_back(*value);
                        kept.push_back(cell);
                    } else {
                        ++col.missing_count;
                    }
                }
                present = std::move(kept);
            }
        }

        if (present.empty()) {
            col.inferred_kind = ColumnKind::Unknown;
            col.entropy_bits = 0.0;
        } else if (numeric) {
            col.inferred_kind = ColumnKind::Numeric;
            std::map<double, long long> counts;
            double sum = 0.0;
            double lo = numbers.front(), hi = numbers.front();
            for (double v : numbers) {
                ++counts[v];
                sum += v;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            col.distinct_count = static_cast<long long>(counts.size());
            col.min = lo;
            col.max = hi;
            double mean = sum / static_cast<double>(numbers.size());
            col.mean = mean;
            double var = 0.0;
            for (double v : numbers) var += (v - mean) * (v - mean);
            col.std_dev = std::sqrt(var / static_cast<double>(numbers.size()));
            std::vector<long long> count_list;
            count_list.reserve(counts.size());
            for (const auto& [_, n] : counts) count_list.push_back(n);
            col.entropy_bits = entropy(count_list);
            if (numbers.size() >= 2)
                col.normalization = detect_normalization(col);
        } else {
            col.inferred_kind = ColumnKind::Categorical;
            for (std::string_view cell : present)
                ++col.value_counts[std::string(cell)];
            col.distinct_count =
                static_cast<long long>(col.value_counts.size());
            std::vector<long long> count_list;
            count_list.reserve(col.value_counts.size());
            for (const auto& [_, n] : col.value_counts)
                count_list.push_back(n);
            col.entropy_bits = entropy(count_list);

            if (col_schema && !col_schema->order.empty()) {
                for (const auto& [value, _] : col.value_counts) {
                    bool covered = false;
                    for (const auto& allowed : col_schema->order)
                        if (allowed == value) covered = true;
                    if (!covered)
                        result.notes.push_back(
                            "column " + col.name + ": value " +
                            quote_text(value) +
                            " is not covered by the declared order");
                }
            }
        }

        if (col_schema && col_schema->semantic_category == "label")
            profile.label_column = col.name;
        profile.columns.push_back(std::move(col));
    }
    return result;
}

// --- split audit ----------------------------------------------------------

struct SplitAudit {
    struct Entry {
        std::string source;
        std::map<std::string, double> label_distribution;
        double tv_distance_to_full = 0.0;
    };
    std::vector<Entry> splits;
    double threshold = 0.0;
    enum class Verdict { Stratified, Skewed } verdict = Verdict::Stratified;
};

inline std::map<std::string, double> label_distribution(
    const DataProfile& profile, std::string_view label) {
    const ColumnProfile* col = profile.find_column(label);
    if (!col)
        throw std::invalid_argument("label column '" + std::string(label) +
                                    "' not found in " + profile.source);
    if (col->inferred_kind != ColumnKind::Categorical ||
        col->value_counts.empty())
        throw std::invalid_argument(
            "label column '" + std::string(label) + "' in " + profile.source +
            " has no categorical value counts; profile it with a schema "
            "declaring kind = categorical");
    long long total = 0;
    for (const auto& [_, n] : col->value_counts) total += n;
    std::map<std::string, double> dist;
    for (const auto& [value, n] : col->value_counts)
        dist[value] = static_cast<double>(n) / static_cast<double>(total);
    return dist;
}

// Compares each split's label distribution against the full dataset's.
// Stratified iff every total variation distance stays within the threshold.
inline SplitAudit audit_split(const DataProfile& full,
                              const std::vector<DataProfile>& splits,
                              std::string_view label, double threshold) {
    SplitAudit audit;
    audit.threshold = threshold;
    auto full_dist = label_distribution(full, label);
    bool all_within = true;
    for (const auto& split : splits) {
        SplitAudit::Entry entry;
        entry.source = split.source;
        entry.label_distribution = label_distribution(split, label);
        entry.tv_distance_to_full =
            distribution_distance(entry.label_distribution, full_dist);
        if (entry.tv_distance_to_full > threshold) all_within = false;
        audit.splits.push_back(std::move(entry));
    }
    audit.verdict = all_within ? SplitAudit::Verdict::Stratified
                               : SplitAudit::Verdict::Skewed;
    return audit;
}

// --- .profile file format ---------------------------------------------------

// One block per column, stable field order; floats use the shortest
// round-tripping form so identical inputs give identical bytes.
inline std::string write_profile(const DataProfile& profile) {
    std::string out;
    out += "profile {\n";
    out += "  source = " + quote_text(profile.source) + "\n";
    out += "  rows = " + std::to_string(profile.row_count) + "\n";
    if (profile.label_column)
        out += "  label = " + quote_text(*profile.label_column) + "\n";
    out += "}\n";
    for (const auto& col : profile.columns) {
        out += "column " + quote_text(col.name) + " {\n";
        out += "  kind = " + std::string(column_kind_name(col.inferred_kind)) +
               "\n";
        out += "  missing = " + std::to_string(col.missing_count) + "\n";
        out += "  distinct = " + std::to_string(col.distinct_count) + "\n";
        if (col.min) out += "  min = " + format_float(*col.min) + "\n";
        if (col.max) out += "  max = " + format_float(*col.max) + "\n";
        if (col.mean) out += "  mean = " + format_float(*col.mean) + "\n";
        if (col.std_dev) out += "  std = " + format_float(*col.std_dev) + "\n";
        out += "  entropy = " + format_float(col.entropy_bits) + "\n";
        out += "  normalization = " +
               std::string(normalization_name(col.normalization)) + "\n";
        if (col.ordered)
            out += std::string("  ordered = ") +
                   (*col.ordered ? "true" : "false") + "\n";
        for (const auto& [value, count] : col.value_counts)
            out += "  value " + quote_text(value) + " = " +
                   std::to_string(count) + "\n";
        out += "}\n";
    }
    return out;
}

struct ProfileParseResult {
    DataProfile profile;
    std::vector<SpecError> errors;
    bool ok() const { return errors.empty(); }
};

inline ProfileParseResult read_profile(std::string_view source,
                                       std::string file = "") {
    ProfileParseResult result;
    LexResult lex = tokenize_spec_family(source, std::move(file));
    if (!lex.ok()) {
        result.errors.push_back({lex.error->span.start_line,
                                 lex.error->message});
        return result;
    }
    detail::SpecCursor cur(lex.tokens);
    auto error = [&](std::string msg) {
        result.errors.push_back({cur.peek().span.start_line, std::move(msg)});
    };
    auto next_number = [&]() -> std::optional<double> {
        const Token& t = cur.peek();
        if (t.kind == TokenKind::Int) return double(cur.get().int_value);
        if (t.kind == TokenKind::Float) return cur.get().float_value;
        error("expected a number");
        return std::nullopt;
    };

    bool seen_profile_block = false;
    while (!cur.at_eof()) {
        cur.begin_decl();
        bool is_profile = cur.peek().is_word("profile");
        bool is_column = cur.peek().is_word("column");
        if (!is_profile && !is_column) {
            error("expected 'profile' or 'column', found '" +
                  cur.peek().lexeme + "'");
            return result;
        }
        cur.get();
        ColumnProfile col;
        if (is_column) {
            if (cur.peek().kind == TokenKind::Text)
                col.name = cur.get().text_value;
            else if (cur.peek().kind == TokenKind::Identifier)
                col.name = cur.get().lexeme;
            else {
                error("expected a column name");
                return result;
            }
        }
        if (!cur.peek().is_punct("{")) {
            error("expected '{'");
            return result;
        }
        cur.get();
        while (!cur.peek().is_punct("}")) {
            if (cur.at_eof()) {
                error("missing '}'");
                return result;
            }
            cur.begin_decl();
            if (cur.peek().kind != TokenKind::Identifier) {
                error("expected a field name");
                return result;
            }
            std::string field = cur.get().lexeme;
            if (field == "value") {
                const Token& v = cur.peek();
                if (v.kind != TokenKind::Text) {
                    error("expected quoted value");
                    return result;
                }
                std::string value = cur.get().text_value;
                if (!cur.peek().is_punct("=")) {
                    error("expected '='");
                    return result;
                }
                cur.get();
                if (cur.peek().kind != TokenKind::Int) {
                    error("expected a count");
                    return result;
                }
                col.value_counts[value] = cur.get().int_value;
            } else {
                if (!cur.peek().is_punct("=")) {
                    error("expected '=' after '" + field + "'");
                    return result;
                }
                cur.get();
                if (is_profile) {
                    if (field == "source") {
                        if (cur.peek().kind != TokenKind::Text) {
                            error("expected text");
                            return result;
                        }
                        result.profile.source = cur.get().text_value;
                    } else if (field == "rows") {
                        if (cur.peek().kind != TokenKind::Int) {
                            error("expected an int");
                            return result;
                        }
                        result.profile.row_count = cur.get().int_value;
                    } else if (field == "label") {
                        if (cur.peek().kind != TokenKind::Text) {
                            error("expected text");
                            return result;
                        }
                        result.profile.label_column = cur.get().text_value;
                    } else {
                        error("unknown profile field '" + field + "'");
                        return result;
                    }
                } else {
                    if (field == "kind") {
                        std::string kind = cur.get().lexeme;
                        if (kind == "numeric")
                            col.inferred_kind = ColumnKind::Numeric;
                        else if (kind == "categorical")
                            col.inferred_kind = ColumnKind::Categorical;
                        else if (kind == "unknown")
                            col.inferred_kind = ColumnKind::Unknown;
                        else {
                            error("unknown column kind '" + kind + "'");
                            return result;
                        }
                    } else if (field == "missing") {
                        auto v = next_number();
                        if (!v) return result;
                        col.missing_count = static_cast<long long>(*v);
                    } else if (field == "distinct") {
                        auto v = next_number();
                        if (!v) return result;
                        col.distinct_count = static_cast<long long>(*v);
                    } else if (field == "min") {
                        auto v = next_number();
                        if (!v) return result;
                        col.min = *v;
                    } else if (field == "max") {
                        auto v = next_number();
                        if (!v) return result;
                        col.max = *v;
                    } else if (field == "mean") {
                        auto v = next_number();
                        if (!v) return result;
                        col.mean = *v;
                    } else if (field == "std") {
                        auto v = next_number();
                        if (!v) return result;
                        col.std_dev = *v;
                    } else if (field == "entropy") {
                        auto v = next_number();
                        if (!v) return result;
                        col.entropy_bits = *v;
                    } else if (field == "normalization") {
                        std::string n = cur.get().lexeme;
                        if (n == "unit_range")
                            col.normalization = Normalization::UnitRange;
                        else if (n == "zscore")
                            col.normalization = Normalization::ZScore;
                        else if (n == "none")
                            col.normalization = Normalization::None;
                        else {
                            error("unknown normalization '" + n + "'");
                            return result;
                        }
                    } else if (field == "ordered") {
                        if (cur.peek().kind != TokenKind::Bool) {
                            error("expected true or false");
                            return result;
                        }
                        col.ordered = cur.get().bool_value;
                    } else {
                        error("unknown column field '" + field + "'");
                        return result;
                    }
                }
            }
            if (cur.peek().is_punct(";")) cur.get();
        }
        cur.get();  // }
        if (is_profile) {
            seen_profile_block = true;
        } else {
            col.row_count = result.profile.row_count;
            result.profile.columns.push_back(std::move(col));
        }
    }
    if (!seen_profile_block)
        result.errors.push_back({1, "missing profile header block"});
    return result;
}

}  // namespace mlguard
