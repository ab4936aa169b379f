#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mlguard/api_spec.hpp"
#include "mlguard/ast.hpp"
#include "mlguard/diagnostics.hpp"
#include "mlguard/format.hpp"
#include "mlguard/lexer.hpp"
#include "mlguard/resolve.hpp"

namespace mlguard {

struct BackendError {
    int line = 0;
    std::string message;
};

// A code-generation adapter loaded from a .mlbackend file: per-construct
// line templates with named placeholders, plus preamble and postamble.
// Entity/method specializations may override the generic call template.
struct BackendTemplate {
    std::string name;
    std::string version;
    std::vector<std::string> preamble;
    std::vector<std::string> postamble;
    std::map<std::string, std::vector<std::string>> constructs;
    std::map<std::pair<std::string, std::string>, std::vector<std::string>>
        method_overrides;  // (entity, method) -> template lines
};

namespace detail {

// Placeholder vocabulary per construct; {index} and {pipeline} are valid
// everywhere.
inline const std::map<std::string, std::set<std::string>>&
backend_placeholders() {
    static const std::map<std::string, std::set<std::string>> table = {
        {"preamble", {}},
        {"postamble", {}},
        {"load", {"var", "path", "schema_arg"}},
        {"split",
         {"train", "val", "test", "source", "train_ratio", "val_ratio",
          "test_ratio", "stratify_arg", "seed_arg"}},
        {"transform", {"var", "entity", "args", "fit_on"}},
        {"apply", {"var", "transform", "dataset"}},
        {"model", {"var", "entity", "args"}},
        {"set", {"model", "param", "value"}},
        {"call", {"var_assign", "model", "method", "dataset"}},
        {"evaluate", {"var", "metric", "model", "dataset"}},
        {"require", {"metric", "op", "threshold"}},
    };
    return table;
}

inline bool validate_template_line(const std::string& construct,
                                   const std::string& line, int line_no,
                                   std::vector<BackendError>& errors) {
    const auto& allowed = backend_placeholders().at(construct);
    bool ok = true;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] != '{') continue;
        if (i + 1 < line.size() && line[i + 1] == '{') {
            ++i;  // literal brace
            continue;
        }
        auto close = line.find('}', i);
        if (close == std::string::npos) {
            errors.push_back({line_no, "template " + construct +
                                           ": unterminated placeholder"});
            return false;
        }
        std::string name = line.substr(i + 1, close - i - 1);
        if (name != "index" && name != "pipeline" && !allowed.count(name)) {
            errors.push_back({line_no, "template " + construct +
                                           ": unknown placeholder {" + name +
                                           "}"});
            ok = false;
        }
        i = close;
    }
    return ok;
}

}  // namespace detail

struct BackendParseResult {
    std::optional<BackendTemplate> backend;
    std::vector<BackendError> errors;
    bool ok() const { return backend.has_value(); }
};

// backend reference version "1.0" {
//   template load {
//     emit "# stmt {index}: load"
//     emit "{var} = read_table({path}{schema_arg})"
//   }
//   ...
// }
inline BackendParseResult load_backend(std::string_view source,
                                       std::string file = "") {
    BackendParseResult result;
    std::vector<BackendError>& errors = result.errors;
    LexResult lex = tokenize_spec_family(source, std::move(file));
    if (!lex.ok()) {
        errors.push_back({lex.error->span.start_line, lex.error->message});
        return result;
    }
    detail::SpecCursor cur(lex.tokens);
    BackendTemplate backend;
    auto error = [&](std::string msg) {
        errors.push_back({cur.peek().span.start_line, std::move(msg)});
    };

    cur.begin_decl();
    if (!cur.peek().is_word("backend")) {
        error("expected 'backend'");
        return result;
    }
    cur.get();
    if (cur.peek().kind != TokenKind::Identifier) {
        error("expected a backend name");
        return result;
    }
    backend.name = cur.get().lexeme;
    if (!cur.peek().is_word("version")) {
        error("expected 'version'");
        return result;
    }
    cur.get();
    if (cur.peek().kind != TokenKind::Text) {
        error("expected a version text literal");
        return result;
    }
    backend.version = cur.get().text_value;
    if (!cur.peek().is_punct("{")) {
        error("expected '{'");
        return result;
    }
    cur.get();

    while (!cur.peek().is_punct("}")) {
        if (cur.at_eof()) {
            error("missing '}' to close the backend block");
            return result;
        }
        cur.begin_decl();
        if (!cur.peek().is_word("template")) {
            error("expected 'template', found '" + cur.peek().lexeme + "'");
            return result;
        }
        cur.get();
        if (cur.peek().kind != TokenKind::Identifier) {
            error("expected a construct name");
            return result;
        }
        std::string construct = cur.get().lexeme;
        std::optional<std::pair<std::string, std::string>> override_key;
        if (construct == "call" && cur.peek().kind == TokenKind::Identifier) {
            // template call SVC.predict_proba { ... }
            std::string entity = cur.get().lexeme;
            if (!cur.peek().is_punct(".")) {
                error("expected '.' in call specialization");
                return result;
            }
            cur.get();
            if (cur.peek().kind != TokenKind::Identifier) {
                error("expected a method name");
                return result;
            }
            override_key = {entity, cur.get().lexeme};
        }
        if (!detail::backend_placeholders().count(construct)) {
            error("unknown template construct '" + construct + "'");
            return result;
        }
        if (!cur.peek().is_punct("{")) {
            error("expected '{'");
            return result;
        }
        cur.get();

        std::vector<std::string> lines;
        while (!cur.peek().is_punct("}")) {
            if (cur.at_eof()) {
                error("missing '}' in template " + construct);
                return result;
            }
            cur.begin_decl();
            if (!cur.peek().is_word("emit")) {
                error("expected 'emit', found '" + cur.peek().lexeme + "'");
                return result;
            }
            int line_no = cur.peek().span.start_line;
            cur.get();
            if (cur.peek().kind != TokenKind::Text) {
                error("expected a text literal after 'emit'");
                return result;
            }
            std::string line = cur.get().text_value;
            detail::validate_template_line(construct, line, line_no, errors);
            lines.push_back(std::move(line));
            if (cur.peek().is_punct(";")) cur.get();
        }
        cur.get();  // }

        if (override_key) {
            backend.method_overrides[*override_key] = std::move(lines);
        } else if (construct == "preamble") {
            backend.preamble = std::move(lines);
        } else if (construct == "postamble") {
            backend.postamble = std::move(lines);
        } else {
            backend.constructs[construct] = std::move(lines);
        }
    }
    cur.get();  // }

    // Every construct the grammar can produce needs a template.
    for (const auto& [construct, _] : detail::backend_placeholders()) {
        if (construct == "preamble" || construct == "postamble") continue;
        if (!backend.constructs.count(construct))
            errors.push_back({1, "backend '" + backend.name +
                                     "' is missing a template for construct: " +
                                     construct});
    }
    if (!errors.empty()) return result;
    result.backend = std::move(backend);
    return result;
}

// --- generation -------------------------------------------------------------

struct RefusalError {
    std::vector<std::string> blocking_codes;
    std::string message;
};

struct GenerateResult {
    std::optional<std::string> text;
    std::optional<RefusalError> refusal;
    bool ok() const { return text.has_value(); }
};

namespace detail {

inline std::string substitute(
    const std::string& line,
    const std::map<std::string, std::string>& values) {
    std::string out;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (c == '{' && i + 1 < line.size() && line[i + 1] == '{') {
            out += '{';
            ++i;
            continue;
        }
        if (c == '}' && i + 1 < line.size() && line[i + 1] == '}') {
            out += '}';
            ++i;
            continue;
        }
        if (c == '{') {
            auto close = line.find('}', i);
            std::string name = line.substr(i + 1, close - i - 1);
            auto it = values.find(name);
            out += it == values.end() ? "" : it->second;
            i = close;
            continue;
        }
        out += c;
    }
    return out;
}

struct RenderVisitor {
    const BackendTemplate& backend;
    const ResolvedProgram& program;
    int index;
    std::map<std::string, std::string> values;

    const std::vector<std::string>* lines = nullptr;

    void fill(const LoadStmt& s) {
        lines = &backend.constructs.at("load");
        values["var"] = s.var;
        values["path"] = quote_text(s.path);
        values["schema_arg"] =
            s.schema_path ? ", schema=" + quote_text(*s.schema_path) : "";
    }
    void fill(const SplitStmt& s) {
        lines = &backend.constructs.at("split");
        values["train"] = s.train_var;
        values["val"] = s.val_var;
        values["test"] = s.test_var;
        values["source"] = s.source;
        values["train_ratio"] = format_float(s.ratios[0]);
        values["val_ratio"] = format_float(s.ratios[1]);
        values["test_ratio"] = format_float(s.ratios[2]);
        values["stratify_arg"] =
            s.stratify_by ? ", stratify=" + quote_text(*s.stratify_by) : "";
        values["seed_arg"] =
            s.seed ? ", seed=" + std::to_string(*s.seed) : "";
    }
    void fill(const TransformDeclStmt& s) {
        lines = &backend.constructs.at("transform");
        values["var"] = s.var;
        values["entity"] = s.entity;
        values["args"] = detail::format_args(s.args);
        values["fit_on"] = s.fit_on;
    }
    void fill(const ApplyStmt& s) {
        lines = &backend.constructs.at("apply");
        values["var"] = s.var;
        values["transform"] = s.transform;
        values["dataset"] = s.dataset;
    }
    void fill(const ModelDeclStmt& s) {
        lines = &backend.constructs.at("model");
        values["var"] = s.var;
        values["entity"] = s.entity;
        values["args"] = detail::format_args(s.args);
    }
    void fill(const SetParamStmt& s) {
        lines = &backend.constructs.at("set");
        values["model"] = s.model;
        values["param"] = s.param;
        values["value"] = s.value.to_string();
    }
    void fill(const FitStmt& s) {
        lines = &backend.constructs.at("fit");
        values["model"] = s.model;
        values["dataset"] = s.dataset;
        values["label"] = quote_text(s.label);
    }
    void fill(const CallStmt& s) {
        lines = &backend.constructs.at("call");
        int m = program.stmt_info[index].model;
        if (m >= 0) {
            auto it = backend.method_overrides.find(
                {program.models[m].entity, s.method});
            if (it != backend.method_overrides.end()) lines = &it->second;
        }
        values["var_assign"] = s.var ? *s.var + " = " : "";
        values["model"] = s.model;
        values["method"] = s.method;
        values["dataset"] = s.dataset;
    }
    void fill(const EvaluateStmt& s) {
        lines = &backend.constructs.at("evaluate");
        values["var"] = s.var;
        values["metric"] = s.metric;
        values["model"] = s.model;
        values["dataset"] = s.dataset;
    }
    void fill(const RequireStmt& s) {
        lines = &backend.constructs.at("require");
        values["metric"] = s.metric;
        values["op"] = std::string(require_op_text(s.op));
        values["threshold"] = format_float(s.threshold);
    }
};

}  // namespace detail

// Renders the checked program through the backend templates. Refuses when
// the report carries errors: programs in the class whose runtime failures
// the checker exists to prevent must never reach generation.
inline GenerateResult generate(const ResolvedProgram& program,
                               const CheckReport& report,
                               const BackendTemplate& backend) {
    if (report.error_count > 0) {
        RefusalError refusal;
        std::set<std::string> codes;
        for (const auto& d : report.diagnostics)
            if (d.severity == Severity::Error) codes.insert(d.code);
        refusal.blocking_codes.assign(codes.begin(), codes.end());
        refusal.message = "refusing to generate code: " +
                          std::to_string(report.error_count) +
                          " error(s) reported (" +
                          join_strings(refusal.blocking_codes) + ")";
        return {std::nullopt, std::move(refusal)};
    }

    std::string out;
    std::map<std::string, std::string> globals{
        {"pipeline", program.ast->name}};
    for (const auto& line : backend.preamble)
        out += detail::substitute(line, globals) + "\n";
    for (std::size_t i = 0; i < program.ast->statements.size(); ++i) {
        detail::RenderVisitor visitor{backend, program, static_cast<int>(i),
                                      globals, nullptr};
        visitor.values["index"] = std::to_string(i + 1);
        std::visit([&](const auto& node) { visitor.fill(node); },
                   program.ast->statements[i].node);
        for (const auto& line : *visitor.lines)
            out += detail::substitute(line, visitor.values) + "\n";
    }
    for (const auto& line : backend.postamble)
        out += detail::substitute(line, globals) + "\n";
    return {std::move(out), std::nullopt};
}

}  // namespace mlguard
