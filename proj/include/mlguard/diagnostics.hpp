#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlguard/lexer.hpp"
#include "mlguard/source.hpp"

namespace mlguard {

enum class Severity { Error, Warning, Info };

inline std::string_view severity_name(Severity s) {
    switch (s) {
        case Severity::Error: return "error";
        case Severity::Warning: return "warning";
        case Severity::Info: return "info";
    }
    return "?";
}

// A machine-applicable edit suggested alongside a diagnostic.
struct Quickfix {
    SourceSpan span;
    std::string replacement;
    std::string description;
};

struct Diagnostic {
    std::string code;        // registry key, e.g. E-TYPE-001
    Severity severity = Severity::Error;
    SourceSpan span;
    std::string message;
    std::string explanation;
    std::vector<Quickfix> suggestions;
};

inline Diagnostic make_diagnostic(std::string code, Severity severity,
                                  SourceSpan span, std::string message) {
    Diagnostic d;
    d.code = std::move(code);
    d.severity = severity;
    d.span = std::move(span);
    d.message = std::move(message);
    return d;
}

struct CheckReport {
    std::vector<Diagnostic> diagnostics;  // sorted by (file, start_byte, code)
    int error_count = 0;
    int warning_count = 0;
};

// Deduplicates, sorts and counts. Every pass output funnels through here so
// reports are byte-stable for identical inputs.
inline CheckReport finalize_report(std::vector<Diagnostic> diagnostics) {
    std::stable_sort(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& a, const Diagnostic& b) {
                         if (a.span.file != b.span.file)
                             return a.span.file < b.span.file;
                         if (a.span.start_byte != b.span.start_byte)
                             return a.span.start_byte < b.span.start_byte;
                         if (a.code != b.code) return a.code < b.code;
                         return a.message < b.message;
                     });
    CheckReport report;
    for (auto& d : diagnostics) {
        bool duplicate = false;
        if (!report.diagnostics.empty()) {
            const Diagnostic& prev = report.diagnostics.back();
            duplicate = prev.code == d.code && prev.span == d.span &&
                        prev.message == d.message;
        }
        if (duplicate) continue;
        report.diagnostics.push_back(std::move(d));
    }
    for (const auto& d : report.diagnostics) {
        if (d.severity == Severity::Error) ++report.error_count;
        if (d.severity == Severity::Warning) ++report.warning_count;
    }
    return report;
}

// `<file>:<line>:<col>: <severity>[<CODE>]: <message>` plus help lines.
inline std::string render_human(const Diagnostic& d) {
    std::string out = d.span.file + ":" + std::to_string(d.span.start_line) +
                      ":" + std::to_string(d.span.start_col) + ": " +
                      std::string(severity_name(d.severity)) + "[" + d.code +
                      "]: " + d.message + "\n";
    for (const auto& fix : d.suggestions)
        out += "  help: " + fix.description + "\n";
    return out;
}

inline std::string render_human(const CheckReport& report) {
    std::string out;
    for (const auto& d : report.diagnostics) out += render_human(d);
    return out;
}

namespace detail {

inline std::string escape_record_field(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

// One tab-separated record per diagnostic:
// path, start_line, start_col, end_line, end_col, code, severity, message,
// suggestion_count, suggestions...
inline std::string render_records(const CheckReport& report) {
    std::string out;
    for (const auto& d : report.diagnostics) {
        out += detail::escape_record_field(d.span.file);
        out += "\t" + std::to_string(d.span.start_line);
        out += "\t" + std::to_string(d.span.start_col);
        out += "\t" + std::to_string(d.span.end_line);
        out += "\t" + std::to_string(d.span.end_col);
        out += "\t" + d.code;
        out += "\t" + std::string(severity_name(d.severity));
        out += "\t" + detail::escape_record_field(d.message);
        out += "\t" + std::to_string(d.suggestions.size());
        for (const auto& fix : d.suggestions)
            out += "\t" + detail::escape_record_field(fix.description);
        out += "\n";
    }
    return out;
}

// --- diagnostic registry ------------------------------------------------

struct RegistryEntry {
    std::string code;
    std::string summary;
    std::vector<std::string> paragraphs;
};

struct DiagnosticRegistry {
    std::map<std::string, RegistryEntry> entries;

    const RegistryEntry* find(std::string_view code) const {
        auto it = entries.find(std::string(code));
        return it == entries.end() ? nullptr : &it->second;
    }
};

struct RegistryParseResult {
    DiagnosticRegistry registry;
    std::vector<SpecError> errors;
    bool ok() const { return errors.empty(); }
};

// diagnostics.registry format:
//   code "E-TYPE-001" {
//     summary "..."
//     explain "..."
//   }
inline RegistryParseResult parse_registry(std::string_view source) {
    RegistryParseResult result;
    LexResult lex = tokenize_spec_family(source, "diagnostics.registry");
    if (!lex.ok()) {
        result.errors.push_back({lex.error->span.start_line,
                                 lex.error->message});
        return result;
    }
    const auto& toks = lex.tokens;
    std::size_t pos = 0;
    auto error = [&](std::string msg) {
        result.errors.push_back(
            {toks[pos].span.start_line, std::move(msg)});
    };
    while (toks[pos].kind != TokenKind::Eof) {
        if (!toks[pos].is_word("code")) {
            error("expected 'code'");
            return result;
        }
        ++pos;
        RegistryEntry entry;
        if (toks[pos].kind != TokenKind::Text) {
            error("expected quoted diagnostic code");
            return result;
        }
        entry.code = toks[pos].text_value;
        ++pos;
        if (!toks[pos].is_punct("{")) {
            error("expected '{'");
            return result;
        }
        ++pos;
        while (!toks[pos].is_punct("}")) {
            if (toks[pos].kind == TokenKind::Eof) {
                error("missing '}' in registry entry " + entry.code);
                return result;
            }
            bool is_summary = toks[pos].is_word("summary");
            bool is_explain = toks[pos].is_word("explain");
            if (!is_summary && !is_explain) {
                error("expected 'summary' or 'explain'");
                return result;
            }
            ++pos;
            if (toks[pos].kind != TokenKind::Text) {
                error("expected text literal");
                return result;
            }
            if (is_summary) entry.summary = toks[pos].text_value;
            else entry.paragraphs.push_back(toks[pos].text_value);
            ++pos;
        }
        ++pos;  // }
        if (result.registry.entries.count(entry.code)) {
            error("duplicate registry code " + entry.code);
            return result;
        }
        result.registry.entries.emplace(entry.code, std::move(entry));
    }
    return result;
}

inline std::string render_explanation(const RegistryEntry& entry) {
    std::string out = entry.code + ": " + entry.summary + "\n";
    for (const auto& p : entry.paragraphs) out += "\n" + p + "\n";
    return out;
}

}  // namespace mlguard
