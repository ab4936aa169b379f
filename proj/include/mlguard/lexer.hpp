#pragma once

#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mlguard/source.hpp"

namespace mlguard {

enum class TokenKind {
    Keyword,
    Identifier,
    Text,   // double-quoted string literal
    Int,
    Float,
    Bool,
    Punct,
    Eof,
};

struct Token {
    TokenKind kind = TokenKind::Eof;
    std::string lexeme;       // exact source slice covered by span
    SourceSpan span;
    // Decoded payloads; valid for the matching kind only.
    std::string text_value;   // Text, without quotes, escapes resolved
    long long int_value = 0;
    double float_value = 0.0;
    bool bool_value = false;

    bool is_punct(std::string_view p) const {
        return kind == TokenKind::Punct && lexeme == p;
    }
    bool is_keyword(std::string_view k) const {
        return kind == TokenKind::Keyword && lexeme == k;
    }
    // Bare word, whether classified as keyword or identifier.
    bool is_word(std::string_view w) const {
        return (kind == TokenKind::Identifier || kind == TokenKind::Keyword) &&
               lexeme == w;
    }

    Literal to_literal() const {
        Literal l;
        switch (kind) {
            case TokenKind::Text: l = Literal::make_text(text_value); break;
            case TokenKind::Int: l = Literal::make_int(int_value); break;
            case TokenKind::Float: l = Literal::make_float(float_value); break;
            case TokenKind::Bool: l = Literal::make_bool(bool_value); break;
            default: break;
        }
        l.span = span;
        return l;
    }
};

struct LexError {
    SourceSpan span;
    std::string message;
};

struct LexResult {
    std::vector<Token> tokens;
    std::optional<LexError> error;
    bool ok() const { return !error.has_value(); }
};

// Keywords of the pipeline DSL. Spec-family files (.mlspec, .schema,
// .mlbackend) lex with an empty keyword set and match bare words instead.
inline const std::set<std::string, std::less<>>& pipeline_keywords() {
    static const std::set<std::string, std::less<>> kw = {
        "pipeline", "load",  "schema", "split",    "ratios",
        "stratify", "seed",  "apply",  "set",      "call",
        "fit",      "on",    "label",  "evaluate", "require",
    };
    return kw;
}

namespace detail {

class Lexer {
public:
    Lexer(std::string_view source, std::string file,
          const std::set<std::string, std::less<>>* keywords)
        : src_(source), file_(std::move(file)), keywords_(keywords) {}

    LexResult run() {
        LexResult result;
        while (true) {
            skip_trivia();
            if (error_) {
                result.error = error_;
                return result;
            }
            if (pos_ >= src_.size()) {
                Token eof;
                eof.kind = TokenKind::Eof;
                eof.span = point_span();
                result.tokens.push_back(std::move(eof));
                return result;
            }
            Token tok = next_token();
            if (error_) {
                result.error = error_;
                return result;
            }
            result.tokens.push_back(std::move(tok));
        }
    }

private:
    std::string_view src_;
    std::string file_;
    const std::set<std::string, std::less<>>* keywords_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    std::optional<LexError> error_;

    char peek(std::size_t off = 0) const {
        return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
    }

    void advance() {
        if (pos_ >= src_.size()) return;
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    SourceSpan point_span() const {
        SourceSpan s;
        s.file = file_;
        s.start_line = s.end_line = line_;
        s.start_col = s.end_col = col_;
        s.start_byte = s.end_byte = pos_;
        return s;
    }

    struct Mark {
        std::size_t byte;
        int line;
        int col;
    };
    Mark mark() const { return {pos_, line_, col_}; }

    SourceSpan span_from(const Mark& m) const {
        SourceSpan s;
        s.file = file_;
        s.start_line = m.line;
        s.start_col = m.col;
        s.start_byte = m.byte;
        s.end_line = line_;
        s.end_col = col_;
        s.end_byte = pos_;
        return s;
    }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    static bool is_ident_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool is_ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool is_digit(char c) {
        return std::isdigit(static_cast<unsigned char>(c));
    }

    Token finish(TokenKind kind, const Mark& m) {
        Token t;
        t.kind = kind;
        t.span = span_from(m);
        t.lexeme = std::string(src_.substr(m.byte, pos_ - m.byte));
        return t;
    }

    Token next_token() {
        Mark m = mark();
        char c = peek();

        if (is_ident_start(c)) return lex_word(m);
        if (is_digit(c)) return lex_number(m, false);
        if (c == '-') {
            if (peek(1) == '>') {
                advance();
                advance();
                return finish(TokenKind::Punct, m);
            }
            if (is_digit(peek(1))) {
                advance();
                return lex_number(m, true);
            }
            error_ = LexError{span_from(m), "illegal character '-'"};
            return {};
        }
        if (c == '"') return lex_text(m);

        static constexpr std::string_view two_char[] = {"==", "!=", ">=", "<="};
        for (std::string_view op : two_char) {
            if (c == op[0] && peek(1) == op[1]) {
                advance();
                advance();
                return finish(TokenKind::Punct, m);
            }
        }
        static constexpr std::string_view singles = "{}(),:=|.;<>";
        if (singles.find(c) != std::string_view::npos) {
            advance();
            return finish(TokenKind::Punct, m);
        }

        advance();
        error_ = LexError{span_from(m),
                          std::string("illegal character '") + c + "'"};
        return {};
    }

    Token lex_word(const Mark& m) {
        while (is_ident_char(peek())) advance();
        Token t = finish(TokenKind::Identifier, m);
        if (t.lexeme == "true" || t.lexeme == "false") {
            t.kind = TokenKind::Bool;
            t.bool_value = t.lexeme == "true";
        } else if (keywords_ && keywords_->count(t.lexeme)) {
            t.kind = TokenKind::Keyword;
        }
        return t;
    }

    Token lex_number(const Mark& m, bool negative) {
        while (is_digit(peek())) advance();
        bool is_float = false;
        if (peek() == '.' && is_digit(peek(1))) {
            is_float = true;
            advance();
            while (is_digit(peek())) advance();
        }
        Token t = finish(is_float ? TokenKind::Float : TokenKind::Int, m);
        std::string_view digits = t.lexeme;
        if (is_float) {
            double v = 0.0;
            std::from_chars(digits.data(), digits.data() + digits.size(), v);
            t.float_value = v;
        } else {
            long long v = 0;
            std::from_chars(digits.data(), digits.data() + digits.size(), v);
            t.int_value = v;
        }
        (void)negative;  // sign is part of the consumed lexeme
        return t;
    }

    Token lex_text(const Mark& m) {
        advance();  // opening quote
        std::string value;
        while (true) {
            char c = peek();
            if (c == '\0' || c == '\n') {
                error_ = LexError{span_from(m), "unterminated text literal"};
                // Report at the opening quote.
                error_->span.end_line = error_->span.start_line;
                error_->span.end_col = error_->span.start_col + 1;
                error_->span.end_byte = error_->span.start_byte + 1;
                return {};
            }
            if (c == '"') {
                advance();
                break;
            }
            if (c == '\\') {
                advance();
                char e = peek();
                switch (e) {
                    case 'n': value += '\n'; break;
                    case 't': value += '\t'; break;
                    case '"': value += '"'; break;
                    case '\\': value += '\\'; break;
                    default:
                        error_ = LexError{span_from(m),
                                          std::string("unknown escape '\\") +
                                              e + "' in text literal"};
                        return {};
                }
                advance();
                continue;
            }
            value += c;
            advance();
        }
        Token t = finish(TokenKind::Text, m);
        t.text_value = std::move(value);
        return t;
    }
};

}  // namespace detail

// Tokenizes pipeline DSL source. The trailing token is always Eof; every
// token's lexeme is exactly the source slice covered by its span.
inline LexResult tokenize(std::string_view source, std::string file) {
    return detail::Lexer(source, std::move(file), &pipeline_keywords()).run();
}

// Tokenizer for the spec-family file formats (.mlspec, .schema, .mlbackend):
// no reserved words, all bare words come back as identifiers.
inline LexResult tokenize_spec_family(std::string_view source,
                                      std::string file) {
    return detail::Lexer(source, std::move(file), nullptr).run();
}

}  // namespace mlguard
