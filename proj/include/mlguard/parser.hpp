#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mlguard/ast.hpp"
#include "mlguard/diagnostics.hpp"
#include "mlguard/lexer.hpp"

namespace mlguard {

struct ParseResult {
    Pipeline pipeline;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return diagnostics.empty(); }
};

namespace detail {

// Recursive-descent parser over one statement per line. Errors are
// reported as diagnostics and recovery skips to the next line, so later
// statements still parse.
class PipelineParser {
public:
    explicit PipelineParser(const std::vector<Token>& tokens)
        : toks_(tokens) {}

    ParseResult run() {
        parse_header();
        while (true) {
            const Token& t = peek_raw();
            if (t.kind == TokenKind::Eof) {
                syntax_error(t.span, "expected '}' to close the pipeline");
                break;
            }
            if (t.is_punct("}")) {
                result_.pipeline.span =
                    join_spans(result_.pipeline.span, t.span);
                advance();
                if (peek_raw().kind != TokenKind::Eof)
                    syntax_error(peek_raw().span,
                                 "expected end of file after '}'");
                break;
            }
            parse_statement();
        }
        return std::move(result_);
    }

private:
    const std::vector<Token>& toks_;
    std::size_t pos_ = 0;
    int line_ = 0;  // line of the statement being parsed
    ParseResult result_;

    const Token& peek_raw() const { return toks_[pos_]; }
    void advance() {
        if (pos_ + 1 < toks_.size()) ++pos_;
    }

    // Tokens beyond the current statement's line are invisible while a
    // statement parses; the grammar is strictly one statement per line.
    const Token* peek() const {
        const Token& t = peek_raw();
        if (t.kind == TokenKind::Eof || t.span.start_line != line_)
            return nullptr;
        return &t;
    }

    const Token* take() {
        const Token* t = peek();
        if (t) advance();
        return t;
    }

    void syntax_error(SourceSpan span, std::string message) {
        result_.diagnostics.push_back(make_diagnostic(
            "E-SYN-001", Severity::Error, std::move(span), std::move(message)));
    }

    // Panic-mode recovery: skip everything on the current line.
    void skip_line() {
        while (peek_raw().kind != TokenKind::Eof &&
               peek_raw().span.start_line == line_)
            advance();
    }

    std::string describe(const Token* t) const {
        if (!t) return "end of line";
        if (t->kind == TokenKind::Eof) return "end of file";
        return "'" + t->lexeme + "'";
    }

    const Token* expect_ident(std::string_view what) {
        const Token* t = peek();
        if (!t || t->kind != TokenKind::Identifier) {
            syntax_error(t ? t->span : statement_end_span(),
                         "expected " + std::string(what) + ", found " +
                             describe(t));
            return nullptr;
        }
        return take();
    }

    bool expect_punct(std::string_view p) {
        const Token* t = peek();
        if (!t || !t->is_punct(p)) {
            syntax_error(t ? t->span : statement_end_span(),
                         "expected '" + std::string(p) + "', found " +
                             describe(t));
            return false;
        }
        advance();
        return true;
    }

    bool expect_keyword(std::string_view k) {
        const Token* t = peek();
        if (!t || !t->is_keyword(k)) {
            syntax_error(t ? t->span : statement_end_span(),
                         "expected '" + std::string(k) + "', found " +
                             describe(t));
            return false;
        }
        advance();
        return true;
    }

    const Token* expect_text(std::string_view what) {
        const Token* t = peek();
        if (!t || t->kind != TokenKind::Text) {
            syntax_error(t ? t->span : statement_end_span(),
                         "expected " + std::string(what) + ", found " +
                             describe(t));
            return nullptr;
        }
        return take();
    }

    // Zero-width span at the end of the previous token, for
    // "expected ... before end of line" messages.
    SourceSpan statement_end_span() const {
        SourceSpan s = pos_ > 0 ? toks_[pos_ - 1].span : toks_[0].span;
        s.start_line = s.end_line;
        s.start_col = s.end_col;
        s.start_byte = s.end_byte;
        return s;
    }

    void parse_header() {
        line_ = peek_raw().span.start_line;
        result_.pipeline.span = peek_raw().span;
        result_.pipeline.file = peek_raw().span.file;
        if (!expect_keyword("pipeline")) {
            skip_line();
            result_.pipeline.name = "<invalid>";
            return;
        }
        const Token* name = expect_ident("pipeline name");
        if (!name) {
            skip_line();
            result_.pipeline.name = "<invalid>";
            return;
        }
        result_.pipeline.name = name->lexeme;
        result_.pipeline.name_span = name->span;
        if (!expect_punct("{")) skip_line();
    }

    void end_statement(Stmt stmt) {
        stmt.span = join_spans(stmt.span, toks_[pos_ - 1].span);
        if (const Token* extra = peek()) {
            syntax_error(extra->span, "expected end of line, found " +
                                          describe(extra));
            skip_line();
        }
        result_.pipeline.span = join_spans(result_.pipeline.span, stmt.span);
        result_.pipeline.statements.push_back(std::move(stmt));
    }

    void parse_statement() {
        line_ = peek_raw().span.start_line;
        const Token& head = peek_raw();
        Stmt stmt;
        stmt.span = head.span;

        if (head.is_keyword("set")) {
            parse_set(stmt);
        } else if (head.is_keyword("fit")) {
            parse_fit(stmt);
        } else if (head.is_keyword("require")) {
            parse_require(stmt);
        } else if (head.is_keyword("call")) {
            parse_call(stmt, std::nullopt, {});
        } else if (head.kind == TokenKind::Identifier) {
            parse_assignment(stmt);
        } else {
            syntax_error(head.span,
                         "expected a statement, found " + describe(&head));
            skip_line();
        }
    }

    // set <var>.<param> = <literal>
    void parse_set(Stmt& stmt) {
        advance();
        SetParamStmt node;
        const Token* var = expect_ident("a model variable");
        if (!var) return skip_line();
        node.model = var->lexeme;
        node.model_span = var->span;
        if (!expect_punct(".")) return skip_line();
        const Token* param = expect_ident("a parameter name");
        if (!param) return skip_line();
        node.param = param->lexeme;
        node.param_span = param->span;
        if (!expect_punct("=")) return skip_line();
        auto value = expect_literal();
        if (!value) return skip_line();
        node.value = std::move(*value);
        stmt.node = std::move(node);
        end_statement(std::move(stmt));
    }

    // fit <model> on <dataset> label <text>
    void parse_fit(Stmt& stmt) {
        advance();
        FitStmt node;
        const Token* model = expect_ident("a model variable");
        if (!model) return skip_line();
        node.model = model->lexeme;
        node.model_span = model->span;
        if (!expect_keyword("on")) return skip_line();
        const Token* dataset = expect_ident("a dataset variable");
        if (!dataset) return skip_line();
        node.dataset = dataset->lexeme;
        node.dataset_span = dataset->span;
        if (!expect_keyword("label")) return skip_line();
        const Token* label = expect_text("a label column name");
        if (!label) return skip_line();
        node.label = label->text_value;
        node.label_span = label->span;
        stmt.node = std::move(node);
        end_statement(std::move(stmt));
    }

    // require <metric> (>=|>) <float>
    void parse_require(Stmt& stmt) {
        advance();
        RequireStmt node;
        const Token* metric = expect_ident("a metric name");
        if (!metric) return skip_line();
        node.metric = metric->lexeme;
        node.metric_span = metric->span;
        const Token* op = peek();
        if (!op || (!op->is_punct(">=") && !op->is_punct(">"))) {
            syntax_error(op ? op->span : statement_end_span(),
                         "expected '>=' or '>', found " + describe(op));
            return skip_line();
        }
        node.op = op->is_punct(">=") ? RequireOp::Ge : RequireOp::Gt;
        advance();
        const Token* threshold = peek();
        if (!threshold || threshold->kind != TokenKind::Float) {
            syntax_error(threshold ? threshold->span : statement_end_span(),
                         "expected a float threshold, found " +
                             describe(threshold));
            return skip_line();
        }
        node.threshold = threshold->float_value;
        node.threshold_span = threshold->span;
        advance();
        stmt.node = std::move(node);
        end_statement(std::move(stmt));
    }

    // [var =] call <model>.<method> <dataset>
    void parse_call(Stmt& stmt, std::optional<std::string> var,
                    SourceSpan var_span) {
        advance();  // call
        CallStmt node;
        node.var = std::move(var);
        node.var_span = var_span;
        const Token* model = expect_ident("a model variable");
        if (!model) return skip_line();
        node.model = model->lexeme;
        node.model_span = model->span;
        if (!expect_punct(".")) return skip_line();
        const Token* method = expect_ident("a method name");
        if (!method) return skip_line();
        node.method = method->lexeme;
        node.method_span = method->span;
        const Token* dataset = expect_ident("a dataset variable");
        if (!dataset) return skip_line();
        node.dataset = dataset->lexeme;
        node.dataset_span = dataset->span;
        stmt.node = std::move(node);
        end_statement(std::move(stmt));
    }

    std::optional<Literal> expect_literal() {
        const Token* t = peek();
        if (!t || (t->kind != TokenKind::Text && t->kind != TokenKind::Int &&
                   t->kind != TokenKind::Float && t->kind != TokenKind::Bool)) {
            syntax_error(t ? t->span : statement_end_span(),
                         "expected a literal, found " + describe(t));
            return std::nullopt;
        }
        return take()->to_literal();
    }

    // Statements that begin with `<var> =` or `<a>, <b>, <c> =`.
    void parse_assignment(Stmt& stmt) {
        const Token* first = take();
        if (peek() && peek()->is_punct(",")) {
            parse_split(stmt, first);
            return;
        }
        if (!expect_punct("=")) return skip_line();
        const Token* head = peek();
        if (!head) {
            syntax_error(statement_end_span(),
                         "expected an expression after '='");
            return skip_line();
        }
        if (head->is_keyword("load")) {
            parse_load(stmt, first);
        } else if (head->is_keyword("apply")) {
            parse_apply(stmt, first);
        } else if (head->is_keyword("call")) {
            parse_call(stmt, first->lexeme, first->span);
        } else if (head->is_keyword("evaluate")) {
            parse_evaluate(stmt, first);
        } else if (head->kind == TokenKind::Identifier) {
            parse_decl(stmt, first);
        } else {
            syntax_error(head->span,
                         "expected 'load', 'apply', 'call', 'evaluate' or an "
                         "entity name, found " + describe(head));
            skip_line();
        }
    }

    // var = load "path" [schema "path"]
    void parse_load(Stmt& stmt, const Token* var) {
        advance();  // load
        LoadStmt node;
        node.var = var->lexeme;
        node.var_span = var->span;
        const Token* path = expect_text("a data file path");
        if (!path) return skip_line();
        node.path = path->text_value;
        node.path_span = path->span;
        if (const Token* t = peek(); t && t->is_keyword("schema")) {
            advance();
            const Token* schema = expect_text("a schema file path");
            if (!schema) return skip_line();
            node.schema_path = schema->text_value;
            node.schema_span = schema->span;
        }
        stmt.node = std::move(node);
        end_statement(std::move(stmt));
    }

    // a, b, c = split <source> ratios (f, f, f) [stratify "col"] [seed n]
    void parse_split(Stmt& stmt, const Token* first) {
        SplitStmt node;
        node.train_var = first->lexeme;
        node.train_span = first->span;
        if (!expect_punct(",")) return skip_line();
        const Token* val = expect_ident("a variable name");
        if (!val) return skip_line();
        node.val_var = val->lexeme;
        node.val_span = val->span;
        if (!expect_punct(",")) return skip_line();
        const Token* test = expect_ident("a variable name");
        if (!test) return skip_line();
        node.test_var = test->lexeme;
        node.test_span = test->span;
        if (!expect_punct("=")) return skip_line();
        if (!expect_keyword("split")) return skip_line();
        const Token* source = expect_ident("a dataset variable");
        if (!source) return skip_line();
        node.source = source->lexeme;
        node.source_span = source->span;
        if (!expect_keyword("ratios")) return skip_line();
        const Token* open = peek();
        if (!expect_punct("(")) return skip_line();
        node.ratios_span = open->span;
        for (int i = 0; i < 3; ++i) {
            const Token* ratio = peek();
            if (!ratio || ratio->kind != TokenKind::Float) {
                syntax_error(ratio ? ratio->span : statement_end_span(),
                             "expected a float ratio, found " +
                                 describe(ratio));
                return skip_line();
            }
            node.ratios[i] = ratio->float_value;
            node.ratio_spans[i] = ratio->span;
            advance();
            if (i < 2 && !expect_punct(",")) return skip_line();
        }
        const Token* close = peek();
        if (!expect_punct(")")) return skip_line();
        node.ratios_span = join_spans(node.ratios_span, close->span);
        if (const Token* t = peek(); t && t->is_keyword("stratify")) {
            advance();
            const Token* col = expect_text("a column name");
            if (!col) return skip_line();
            node.stratify_by = col->text_value;
            node.stratify_span = col->span;
        }
        if (const Token* t = peek(); t && t->is_keyword("seed")) {
            advance();
            const Token* seed = peek();
            if (!seed || seed->kind != TokenKind::Int) {
                syntax_error(seed ? seed->span : statement_end_span(),
                             "expected an int seed, found " + describe(seed));
                return skip_line();
            }
            node.seed = seed->int_value;
            node.seed_span = seed->span;
            advance();
        }
        stmt.node = std::move(node);
        end_statement(std::move(stmt));
    }

    // var = apply <transform> <dataset>
    void parse_apply(Stmt& stmt, const Token* var) {
        advance();  // apply
        ApplyStmt node;
        node.var = var->lexeme;
        node.var_span = var->span;
        const Token* transform = expect_ident("a transform variable");
        if (!transform) return skip_line();
        node.transform = transform->lexeme;
        node.transform_span = transform->span;
        const Token* dataset = expect_ident("a dataset variable");
        if (!dataset) return skip_line();
        node.dataset = dataset->lexeme;
        node.dataset_span = dataset->span;
        stmt.node = std::move(node);
        end_statement(std::move(stmt));
    }

    // var = evaluate <metric> <model> on <dataset>
    void parse_evaluate(Stmt& stmt, const Token* var) {
        advance();  // evaluate
        EvaluateStmt node;
        node.var = var->lexeme;
        node.var_span = var->span;
        const Token* metric = expect_ident("a metric name");
        if (!metric) return skip_line();
        node.metric = metric->lexeme;
        node.metric_span = metric->span;
        const Token* model = expect_ident("a model variable");
        if (!model) return skip_line();
        node.model = model->lexeme;
        node.model_span = model->span;
        if (!expect_keyword("on")) return skip_line();
        const Token* dataset = expect_ident("a dataset variable");
        if (!dataset) return skip_line();
        node.dataset = dataset->lexeme;
        node.dataset_span = dataset->span;
        stmt.node = std::move(node);
        end_statement(std::move(stmt));
    }

    // var = Entity(args...) [fit on <dataset>]  — model or transform decl
    void parse_decl(Stmt& stmt, const Token* var) {
        const Token* entity = take();
        std::vector<Arg> args;
        if (!expect_punct("(")) return skip_line();
        if (const Token* t = peek(); t && t->is_punct(")")) {
            advance();
        } else {
            while (true) {
                const Token* name = expect_ident("an argument name");
                if (!name) return skip_line();
                if (!expect_punct("=")) return skip_line();
                auto value = expect_literal();
                if (!value) return skip_line();
                Arg arg;
                arg.name = name->lexeme;
                arg.name_span = name->span;
                arg.value = std::move(*value);
                args.push_back(std::move(arg));
                const Token* t = peek();
                if (t && t->is_punct(",")) {
                    advance();
                    continue;
                }
                break;
            }
            if (!expect_punct(")")) return skip_line();
        }

        if (const Token* t = peek(); t && t->is_keyword("fit")) {
            advance();
            if (!expect_keyword("on")) return skip_line();
            const Token* dataset = expect_ident("a dataset variable");
            if (!dataset) return skip_line();
            TransformDeclStmt node;
            node.var = var->lexeme;
            node.var_span = var->span;
            node.entity = entity->lexeme;
            node.entity_span = entity->span;
            node.args = std::move(args);
            node.fit_on = dataset->lexeme;
            node.fit_on_span = dataset->span;
            stmt.node = std::move(node);
            end_statement(std::move(stmt));
            return;
        }

        ModelDeclStmt node;
        node.var = var->lexeme;
        node.var_span = var->span;
        node.entity = entity->lexeme;
        node.entity_span = entity->span;
        node.args = std::move(args);
        stmt.node = std::move(node);
        end_statement(std::move(stmt));
    }
};

}  // namespace detail

// Parses a token stream into a Pipeline. Never halts at the first error:
// malformed statements produce diagnostics and parsing resumes on the
// next line.
inline ParseResult parse_pipeline(const std::vector<Token>& tokens) {
    return detail::PipelineParser(tokens).run();
}

inline ParseResult parse_pipeline_source(std::string_view source,
                                         std::string file) {
    LexResult lex = tokenize(source, file);
    if (!lex.ok()) {
        ParseResult r;
        r.pipeline.file = std::move(file);
        r.pipeline.name = "<invalid>";
        r.diagnostics.push_back(make_diagnostic("E-LEX-001", Severity::Error,
                                                lex.error->span,
                                                lex.error->message));
        return r;
    }
    return parse_pipeline(lex.tokens);
}

}  // namespace mlguard
