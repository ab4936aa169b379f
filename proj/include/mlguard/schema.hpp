#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlguard/api_spec.hpp"
#include "mlguard/lexer.hpp"

namespace mlguard {

// Per-column metadata from a .schema file. Drives kind overrides, ordered
// categories (label vs one-hot encoding advice), semantic categories and
// units of measurement.
struct ColumnSchema {
    std::string name;
    std::optional<std::string> kind;  // "categorical" or "numeric"
    bool ordered = false;
    std::vector<std::string> order;
    std::optional<std::string> semantic_category;
    std::optional<std::string> unit;
    int decl_line = 0;
};

struct SchemaMeta {
    std::vector<ColumnSchema> columns;

    const ColumnSchema* find(std::string_view name) const {
        for (const auto& c : columns)
            if (c.name == name) return &c;
        return nullptr;
    }
};

struct SchemaParseResult {
    SchemaMeta schema;
    std::vector<SpecError> errors;
    bool ok() const { return errors.empty(); }
};

// column class { kind = categorical; ordered = true; order = ("poor","rich");
//                category = wealth_band }
// column distance { kind = numeric; unit = "metres" }
inline SchemaParseResult parse_schema(std::string_view source,
                                      std::string file = "") {
    SchemaParseResult result;
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

    while (!cur.at_eof()) {
        cur.begin_decl();
        if (!cur.peek().is_word("column")) {
            error("expected 'column', found '" + cur.peek().lexeme + "'");
            cur.skip_decl();
            continue;
        }
        cur.get();
        ColumnSchema column;
        column.decl_line = cur.decl_line();
        const Token& name = cur.peek();
        if (name.kind == TokenKind::Identifier) {
            column.name = cur.get().lexeme;
        } else if (name.kind == TokenKind::Text) {
            column.name = cur.get().text_value;
        } else {
            error("expected a column name");
            cur.skip_decl();
            continue;
        }
        if (!cur.peek().is_punct("{")) {
            error("expected '{'");
            cur.skip_decl();
            continue;
        }
        cur.get();

        bool bad = false;
        while (!cur.peek().is_punct("}")) {
            if (cur.at_eof()) {
                error("missing '}' in column block");
                return result;
            }
            cur.begin_decl();
            const Token& key = cur.peek();
            if (key.kind != TokenKind::Identifier) {
                error("expected a field name");
                bad = true;
                cur.skip_decl();
                continue;
            }
            std::string field = cur.get().lexeme;
            if (!cur.peek().is_punct("=")) {
                error("expected '=' after '" + field + "'");
                bad = true;
                cur.skip_decl();
                continue;
            }
            cur.get();

            if (field == "kind") {
                const Token& v = cur.peek();
                if (!v.is_word("categorical") && !v.is_word("numeric")) {
                    error("kind must be 'categorical' or 'numeric'");
                    bad = true;
                    cur.skip_decl();
                    continue;
                }
                column.kind = cur.get().lexeme;
            } else if (field == "ordered") {
                if (cur.peek().kind != TokenKind::Bool) {
                    error("ordered must be true or false");
                    bad = true;
                    cur.skip_decl();
                    continue;
                }
                column.ordered = cur.get().bool_value;
            } else if (field == "order") {
                if (!cur.peek().is_punct("(")) {
                    error("order must be a parenthesized literal list");
                    bad = true;
                    cur.skip_decl();
                    continue;
                }
                cur.get();
                while (true) {
                    if (cur.peek().kind != TokenKind::Text) {
                        error("expected text literal in order list");
                        bad = true;
                        break;
                    }
                    column.order.push_back(cur.get().text_value);
                    if (cur.peek().is_punct(",")) {
                        cur.get();
                        continue;
                    }
                    break;
                }
                if (bad) {
                    cur.skip_decl();
                    continue;
                }
                if (!cur.peek().is_punct(")")) {
                    error("expected ')'");
                    bad = true;
                    cur.skip_decl();
                    continue;
                }
                cur.get();
            } else if (field == "category") {
                const Token& v = cur.peek();
                if (v.kind == TokenKind::Identifier)
                    column.semantic_category = cur.get().lexeme;
                else if (v.kind == TokenKind::Text)
                    column.semantic_category = cur.get().text_value;
                else {
                    error("expected a category name");
                    bad = true;
                    cur.skip_decl();
                    continue;
                }
            } else if (field == "unit") {
                if (cur.peek().kind != TokenKind::Text) {
                    error("unit must be a text literal");
                    bad = true;
                    cur.skip_decl();
                    continue;
                }
                column.unit = cur.get().text_value;
            } else {
                error("unknown schema field '" + field + "'");
                bad = true;
                cur.skip_decl();
                continue;
            }
            if (cur.peek().is_punct(";")) cur.get();
        }
        cur.get();  // }
        if (cur.peek().is_punct(";")) cur.get();

        if (!column.order.empty() && !column.ordered) {
            result.errors.push_back({column.decl_line,
                                     "column " + column.name +
                                         ": order list requires ordered = "
                                         "true"});
            bad = true;
        }
        for (const auto& existing : result.schema.columns)
            if (existing.name == column.name) {
                result.errors.push_back({column.decl_line,
                                         "duplicate column '" + column.name +
                                             "'"});
                bad = true;
            }
        if (!bad) result.schema.columns.push_back(std::move(column));
    }
    return result;
}

}  // namespace mlguard
