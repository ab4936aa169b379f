#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace mlguard {

// Half-open region of a source file. Lines and columns are 1-based,
// byte offsets 0-based; end_byte is one past the last byte.
struct SourceSpan {
    std::string file;
    int start_line = 1;
    int start_col = 1;
    int end_line = 1;
    int end_col = 1;
    std::size_t start_byte = 0;
    std::size_t end_byte = 0;

    bool operator==(const SourceSpan& other) const {
        return file == other.file && start_byte == other.start_byte &&
               end_byte == other.end_byte;
    }

    bool contains(const SourceSpan& inner) const {
        return file == inner.file && start_byte <= inner.start_byte &&
               inner.end_byte <= end_byte;
    }

    std::string_view slice(std::string_view source) const {
        return source.substr(start_byte, end_byte - start_byte);
    }
};

inline SourceSpan join_spans(const SourceSpan& a, const SourceSpan& b) {
    SourceSpan s = a;
    if (b.start_byte < s.start_byte) {
        s.start_byte = b.start_byte;
        s.start_line = b.start_line;
        s.start_col = b.start_col;
    }
    if (b.end_byte > s.end_byte) {
        s.end_byte = b.end_byte;
        s.end_line = b.end_line;
        s.end_col = b.end_col;
    }
    return s;
}

// Shortest fixed-notation decimal that round-trips through double.
// Always contains a '.', so it re-lexes as a float literal.
inline std::string format_float(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value,
                             std::chars_format::fixed);
    std::string text(buf, res.ptr);
    if (text.find('.') == std::string::npos) text += ".0";
    return text;
}

// Compact rendering for human-facing messages ("1.2", not "1.2000000000000002").
inline std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", value);
    return buf;
}

inline std::string join_strings(const std::vector<std::string>& items,
                                std::string_view sep = ", ") {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

enum class LiteralKind { Bool, Int, Float, Text };

inline std::string_view literal_kind_name(LiteralKind k) {
    switch (k) {
        case LiteralKind::Bool: return "bool";
        case LiteralKind::Int: return "int";
        case LiteralKind::Float: return "float";
        case LiteralKind::Text: return "text";
    }
    return "?";
}

inline std::string quote_text(std::string_view raw) {
    std::string out = "\"";
    for (char c : raw) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

// A literal value as written in a .mlp or .mlspec source.
struct Literal {
    LiteralKind kind = LiteralKind::Int;
    bool bool_value = false;
    long long int_value = 0;
    double float_value = 0.0;
    std::string text_value;
    SourceSpan span;

    static Literal make_bool(bool v) {
        Literal l;
        l.kind = LiteralKind::Bool;
        l.bool_value = v;
        return l;
    }
    static Literal make_int(long long v) {
        Literal l;
        l.kind = LiteralKind::Int;
        l.int_value = v;
        return l;
    }
    static Literal make_float(double v) {
        Literal l;
        l.kind = LiteralKind::Float;
        l.float_value = v;
        return l;
    }
    static Literal make_text(std::string v) {
        Literal l;
        l.kind = LiteralKind::Text;
        l.text_value = std::move(v);
        return l;
    }

    double as_number() const {
        return kind == LiteralKind::Int ? static_cast<double>(int_value)
                                        : float_value;
    }

    bool is_numeric() const {
        return kind == LiteralKind::Int || kind == LiteralKind::Float;
    }

    // Canonical source rendering; parse(to_string(x)) == x.
    std::string to_string() const {
        switch (kind) {
            case LiteralKind::Bool: return bool_value ? "true" : "false";
            case LiteralKind::Int: return std::to_string(int_value);
            case LiteralKind::Float: return format_float(float_value);
            case LiteralKind::Text: return quote_text(text_value);
        }
        return "";
    }

    // Value equality; int and float compare numerically, spans are ignored.
    bool equals(const Literal& other) const {
        if (is_numeric() && other.is_numeric())
            return as_number() == other.as_number();
        if (kind != other.kind) return false;
        switch (kind) {
            case LiteralKind::Bool: return bool_value == other.bool_value;
            case LiteralKind::Text: return text_value == other.text_value;
            default: return true;
        }
    }
};

}  // namespace mlguard
