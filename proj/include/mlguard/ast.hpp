#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mlguard/source.hpp"

namespace mlguard {

// A named argument in an entity instantiation: kernel="rbf".
struct Arg {
    std::string name;
    SourceSpan name_span;
    Literal value;
};

// data = load "train.csv" schema "train.schema"
struct LoadStmt {
    std::string var;
    SourceSpan var_span;
    std::string path;
    SourceSpan path_span;
    std::optional<std::string> schema_path;
    SourceSpan schema_span;
};

// train, val, test = split data ratios (0.7, 0.15, 0.15) stratify "survived" seed 42
struct SplitStmt {
    std::string train_var, val_var, test_var;
    SourceSpan train_span, val_span, test_span;
    std::string source;
    SourceSpan source_span;
    double ratios[3] = {0, 0, 0};
    SourceSpan ratio_spans[3];
    SourceSpan ratios_span;  // covers the parenthesized triple
    std::optional<std::string> stratify_by;
    SourceSpan stratify_span;
    std::optional<long long> seed;
    SourceSpan seed_span;
};

// imp = impute(strategy="mean") fit on train
struct TransformDeclStmt {
    std::string var;
    SourceSpan var_span;
    std::string entity;
    SourceSpan entity_span;
    std::vector<Arg> args;
    std::string fit_on;
    SourceSpan fit_on_span;
};

// train = apply imp train
struct ApplyStmt {
    std::string var;
    SourceSpan var_span;
    std::string transform;
    SourceSpan transform_span;
    std::string dataset;
    SourceSpan dataset_span;
};

// model = SVC(kernel="poly", degree=3)
struct ModelDeclStmt {
    std::string var;
    SourceSpan var_span;
    std::string entity;
    SourceSpan entity_span;
    std::vector<Arg> args;
};

// set model.probability = true
struct SetParamStmt {
    std::string model;
    SourceSpan model_span;
    std::string param;
    SourceSpan param_span;
    Literal value;
};

// fit model on train label "survived"
struct FitStmt {
    std::string model;
    SourceSpan model_span;
    std::string dataset;
    SourceSpan dataset_span;
    std::string label;
    SourceSpan label_span;
};

// preds = call model.predict_proba val
struct CallStmt {
    std::optional<std::string> var;
    SourceSpan var_span;
    std::string model;
    SourceSpan model_span;
    std::string method;
    SourceSpan method_span;
    std::string dataset;
    SourceSpan dataset_span;
};

// score = evaluate accuracy model on val
struct EvaluateStmt {
    std::string var;
    SourceSpan var_span;
    std::string metric;
    SourceSpan metric_span;
    std::string model;
    SourceSpan model_span;
    std::string dataset;
    SourceSpan dataset_span;
};

enum class RequireOp { Ge, Gt };

// require accuracy >= 0.8
struct RequireStmt {
    std::string metric;
    SourceSpan metric_span;
    RequireOp op = RequireOp::Ge;
    double threshold = 0.0;
    SourceSpan threshold_span;
};

using StmtNode = std::variant<LoadStmt, SplitStmt, TransformDeclStmt,
                              ApplyStmt, ModelDeclStmt, SetParamStmt, FitStmt,
                              CallStmt, EvaluateStmt, RequireStmt>;

struct Stmt {
    StmtNode node;
    SourceSpan span;

    template <typename T>
    const T* as() const {
        return std::get_if<T>(&node);
    }
};

// AST root. Statement order is preserved exactly as written; the checker
// is flow-sensitive over this straight-line sequence.
struct Pipeline {
    std::string name;
    SourceSpan name_span;
    std::vector<Stmt> statements;
    SourceSpan span;
    std::string file;
};

inline std::string_view require_op_text(RequireOp op) {
    return op == RequireOp::Ge ? ">=" : ">";
}

}  // namespace mlguard
