#pragma once

#include <string>

#include "mlguard/ast.hpp"

namespace mlguard {

namespace detail {

inline std::string format_args(const std::vector<Arg>& args) {
    std::string out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        out += args[i].name + "=" + args[i].value.to_string();
    }
    return out;
}

struct StmtFormatter {
    std::string operator()(const LoadStmt& s) const {
        std::string out = s.var + " = load " + quote_text(s.path);
        if (s.schema_path) out += " schema " + quote_text(*s.schema_path);
        return out;
    }
    std::string operator()(const SplitStmt& s) const {
        std::string out = s.train_var + ", " + s.val_var + ", " + s.test_var +
                          " = split " + s.source + " ratios (" +
                          format_float(s.ratios[0]) + ", " +
                          format_float(s.ratios[1]) + ", " +
                          format_float(s.ratios[2]) + ")";
        if (s.stratify_by) out += " stratify " + quote_text(*s.stratify_by);
        if (s.seed) out += " seed " + std::to_string(*s.seed);
        return out;
    }
    std::string operator()(const TransformDeclStmt& s) const {
        return s.var + " = " + s.entity + "(" + format_args(s.args) +
               ") fit on " + s.fit_on;
    }
    std::string operator()(const ApplyStmt& s) const {
        return s.var + " = apply " + s.transform + " " + s.dataset;
    }
    std::string operator()(const ModelDeclStmt& s) const {
        return s.var + " = " + s.entity + "(" + format_args(s.args) + ")";
    }
    std::string operator()(const SetParamStmt& s) const {
        return "set " + s.model + "." + s.param + " = " + s.value.to_string();
    }
    std::string operator()(const FitStmt& s) const {
        return "fit " + s.model + " on " + s.dataset + " label " +
               quote_text(s.label);
    }
    std::string operator()(const CallStmt& s) const {
        std::string out;
        if (s.var) out += *s.var + " = ";
        return out + "call " + s.model + "." + s.method + " " + s.dataset;
    }
    std::string operator()(const EvaluateStmt& s) const {
        return s.var + " = evaluate " + s.metric + " " + s.model + " on " +
               s.dataset;
    }
    std::string operator()(const RequireStmt& s) const {
        return "require " + s.metric + " " +
               std::string(require_op_text(s.op)) + " " +
               format_float(s.threshold);
    }
};

}  // namespace detail

inline std::string format_statement(const Stmt& stmt) {
    return std::visit(detail::StmtFormatter{}, stmt.node);
}

// Canonical, deterministic rendering; format(parse(format(x))) == format(x).
inline std::string format(const Pipeline& ast) {
    std::string out = "pipeline " + ast.name + " {\n";
    for (const auto& stmt : ast.statements)
        out += "  " + format_statement(stmt) + "\n";
    out += "}\n";
    return out;
}

}  // namespace mlguard
