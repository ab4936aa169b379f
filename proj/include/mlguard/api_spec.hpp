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

enum class PrimKind { Bool, Int, Float, Text, Table, Column };

inline std::string_view prim_kind_name(PrimKind k) {
    switch (k) {
        case PrimKind::Bool: return "bool";
        case PrimKind::Int: return "int";
        case PrimKind::Float: return "float";
        case PrimKind::Text: return "text";
        case PrimKind::Table: return "table";
        case PrimKind::Column: return "column";
    }
    return "?";
}

inline std::optional<PrimKind> prim_kind_from(std::string_view word) {
    if (word == "bool") return PrimKind::Bool;
    if (word == "int") return PrimKind::Int;
    if (word == "float") return PrimKind::Float;
    if (word == "text") return PrimKind::Text;
    if (word == "table") return PrimKind::Table;
    if (word == "column") return PrimKind::Column;
    return std::nullopt;
}

// A type narrowed beyond its primitive kind: an enumerated literal set, a
// bounded numeric range, an opaque callable signature, or a union of these.
struct RefinedType {
    enum class Variant { Primitive, EnumLiterals, NumericRange, CallableSig, Union };

    Variant variant = Variant::Primitive;
    PrimKind prim = PrimKind::Bool;              // Primitive / NumericRange kind
    std::vector<std::string> enum_values;        // EnumLiterals
    std::optional<Literal> range_min;            // NumericRange
    std::optional<Literal> range_max;
    bool min_inclusive = true;
    bool max_inclusive = true;
    long long callable_arity = 0;                // CallableSig
    std::string callable_note;
    std::vector<RefinedType> members;            // Union

    static RefinedType primitive(PrimKind k) {
        RefinedType t;
        t.variant = Variant::Primitive;
        t.prim = k;
        return t;
    }

    bool equals(const RefinedType& o) const {
        if (variant != o.variant) return false;
        switch (variant) {
            case Variant::Primitive: return prim == o.prim;
            case Variant::EnumLiterals: return enum_values == o.enum_values;
            case Variant::NumericRange:
                return prim == o.prim && min_inclusive == o.min_inclusive &&
                       max_inclusive == o.max_inclusive &&
                       range_min.has_value() == o.range_min.has_value() &&
                       range_max.has_value() == o.range_max.has_value() &&
                       (!range_min || range_min->equals(*o.range_min)) &&
                       (!range_max || range_max->equals(*o.range_max));
            case Variant::CallableSig:
                return callable_arity == o.callable_arity &&
                       callable_note == o.callable_note;
            case Variant::Union:
                if (members.size() != o.members.size()) return false;
                for (std::size_t i = 0; i < members.size(); ++i)
                    if (!members[i].equals(o.members[i])) return false;
                return true;
        }
        return false;
    }
};

struct Condition {
    std::string param;
    enum class Op { Eq, Ne } op = Op::Eq;
    Literal value;

    bool holds(const Literal& actual) const {
        bool eq = actual.equals(value);
        return op == Op::Eq ? eq : !eq;
    }
    std::string op_text() const { return op == Op::Eq ? "==" : "!="; }
};

struct ContextWarning {
    std::string tag;
    std::string message;
};

struct ParameterSpec {
    std::string name;
    RefinedType ty;
    std::optional<Literal> default_value;
    std::optional<Condition> relevant_when;
    std::optional<ContextWarning> context_warning;
    int decl_line = 0;
};

struct MethodSpec {
    std::string name;
    std::vector<PrimKind> params;
    std::optional<PrimKind> return_kind;
    int decl_line = 0;
};

struct TemporalRule {
    enum class Variant { MustPrecede, RequireSetBefore };
    Variant variant = Variant::MustPrecede;
    // MustPrecede
    std::string first;
    std::string second;
    // RequireSetBefore
    std::string param;
    Literal required_value;
    std::string method;
    int decl_line = 0;
};

enum class EntityKind { Model, Transform };
enum class Task { Classification, Regression, Both, None };

inline std::string_view task_name(Task t) {
    switch (t) {
        case Task::Classification: return "classification";
        case Task::Regression: return "regression";
        case Task::Both: return "both";
        case Task::None: return "none";
    }
    return "?";
}

struct EntitySpec {
    std::string name;
    EntityKind kind = EntityKind::Model;
    Task task = Task::None;
    std::vector<ParameterSpec> params;
    std::vector<MethodSpec> methods;
    std::vector<TemporalRule> temporal;
    int decl_line = 0;

    const ParameterSpec* find_param(std::string_view n) const {
        for (const auto& p : params)
            if (p.name == n) return &p;
        return nullptr;
    }
    const MethodSpec* find_method(std::string_view n) const {
        for (const auto& m : methods)
            if (m.name == n) return &m;
        return nullptr;
    }
};

struct MetricSpec {
    std::string name;
    Task task = Task::Classification;  // classification or regression only
    int decl_line = 0;
};

struct ApiSpec {
    std::map<std::string, EntitySpec> entities;
    std::map<std::string, MetricSpec> metrics;
    std::string version;
    std::string source_name;  // file the spec was loaded from, for messages
};

struct SpecError {
    int line = 0;
    std::string message;
};

// --- literal/type fitting -------------------------------------------------

enum class FitResult { Ok, KindMismatch, NotInEnum, OutOfRange };

struct TypeFit {
    FitResult result = FitResult::Ok;
    const RefinedType* against = nullptr;  // member that best explains a failure
};

namespace detail {

inline bool literal_matches_prim(const Literal& lit, PrimKind prim) {
    switch (prim) {
        case PrimKind::Bool: return lit.kind == LiteralKind::Bool;
        case PrimKind::Int: return lit.kind == LiteralKind::Int;
        case PrimKind::Float: return lit.is_numeric();  // int widens to float
        case PrimKind::Text: return lit.kind == LiteralKind::Text;
        case PrimKind::Table:
        case PrimKind::Column: return false;  // never literal-valued
    }
    return false;
}

inline bool in_range(const Literal& lit, const RefinedType& ty) {
    double v = lit.as_number();
    if (ty.range_min) {
        double lo = ty.range_min->as_number();
        if (ty.min_inclusive ? v < lo : v <= lo) return false;
    }
    if (ty.range_max) {
        double hi = ty.range_max->as_number();
        if (ty.max_inclusive ? v > hi : v >= hi) return false;
    }
    return true;
}

}  // namespace detail

// Checks a literal against a refined type. For unions, the failure reported
// is the member whose kind domain matches the literal, so an invalid enum
// string fails as NotInEnum even when a callable member is present.
inline TypeFit fit_literal(const Literal& lit, const RefinedType& ty) {
    using V = RefinedType::Variant;
    switch (ty.variant) {
        case V::Primitive:
            return {detail::literal_matches_prim(lit, ty.prim)
                        ? FitResult::Ok
                        : FitResult::KindMismatch,
                    &ty};
        case V::EnumLiterals: {
            if (lit.kind != LiteralKind::Text)
                return {FitResult::KindMismatch, &ty};
            bool found = std::find(ty.enum_values.begin(), ty.enum_values.end(),
                                   lit.text_value) != ty.enum_values.end();
            return {found ? FitResult::Ok : FitResult::NotInEnum, &ty};
        }
        case V::NumericRange: {
            bool kind_ok = ty.prim == PrimKind::Int
                               ? lit.kind == LiteralKind::Int
                               : lit.is_numeric();
            if (!kind_ok) return {FitResult::KindMismatch, &ty};
            return {detail::in_range(lit, ty) ? FitResult::Ok
                                              : FitResult::OutOfRange,
                    &ty};
        }
        case V::CallableSig:
            // The DSL has no callable literals; opaque to literal checking.
            return {FitResult::KindMismatch, &ty};
        case V::Union: {
            TypeFit best{FitResult::KindMismatch, &ty};
            for (const auto& m : ty.members) {
                TypeFit fit = fit_literal(lit, m);
                if (fit.result == FitResult::Ok) return fit;
                // Prefer the most specific failure explanation.
                auto rank = [](FitResult r) {
                    switch (r) {
                        case FitResult::NotInEnum: return 3;
                        case FitResult::OutOfRange: return 2;
                        case FitResult::KindMismatch: return 1;
                        default: return 0;
                    }
                };
                if (rank(fit.result) > rank(best.result)) best = fit;
            }
            return best;
        }
    }
    return {FitResult::KindMismatch, &ty};
}

// Human description of what a refined type accepts ("a float between 0 and 1",
// 'one of "linear", "poly", ...').
inline std::string describe_type(const RefinedType& ty) {
    using V = RefinedType::Variant;
    switch (ty.variant) {
        case V::Primitive:
            switch (ty.prim) {
                case PrimKind::Bool: return "a bool";
                case PrimKind::Int: return "an int";
                case PrimKind::Float: return "a float";
                case PrimKind::Text: return "a text value";
                case PrimKind::Table: return "a table";
                case PrimKind::Column: return "a column";
            }
            return "?";
        case V::EnumLiterals: {
            std::string out = "one of ";
            for (std::size_t i = 0; i < ty.enum_values.size(); ++i) {
                if (i) out += ", ";
                out += quote_text(ty.enum_values[i]);
            }
            return out;
        }
        case V::NumericRange: {
            std::string base = ty.prim == PrimKind::Int ? "an int" : "a float";
            if (ty.range_min && ty.range_max && ty.min_inclusive &&
                ty.max_inclusive) {
                return base + " between " +
                       format_number(ty.range_min->as_number()) + " and " +
                       format_number(ty.range_max->as_number());
            }
            std::string out = base;
            if (ty.range_min)
                out += std::string(ty.min_inclusive ? " >= " : " > ") +
                       format_number(ty.range_min->as_number());
            if (ty.range_min && ty.range_max) out += " and";
            if (ty.range_max)
                out += std::string(ty.max_inclusive ? " <= " : " < ") +
                       format_number(ty.range_max->as_number());
            return out;
        }
        case V::CallableSig:
            return "a callable of arity " + std::to_string(ty.callable_arity);
        case V::Union: {
            std::string out;
            for (std::size_t i = 0; i < ty.members.size(); ++i) {
                if (i) out += " or ";
                out += describe_type(ty.members[i]);
            }
            return out;
        }
    }
    return "?";
}

// Collects the full literal set a type accepts, when finite (enum members,
// possibly buried in a union). Used for recovery hints.
inline std::vector<std::string> enum_candidates(const RefinedType& ty) {
    std::vector<std::string> out;
    if (ty.variant == RefinedType::Variant::EnumLiterals)
        return ty.enum_values;
    if (ty.variant == RefinedType::Variant::Union) {
        for (const auto& m : ty.members) {
            auto sub = enum_candidates(m);
            out.insert(out.end(), sub.begin(), sub.end());
        }
    }
    return out;
}

// --- validation -------------------------------------------------------------

namespace detail {

inline void validate_refined_type(const RefinedType& ty,
                                  const std::string& where, int line,
                                  std::vector<SpecError>& errors) {
    using V = RefinedType::Variant;
    switch (ty.variant) {
        case V::EnumLiterals: {
            if (ty.enum_values.empty())
                errors.push_back(
                    {line, where + ": enum must list at least one literal"});
            for (std::size_t i = 0; i < ty.enum_values.size(); ++i)
                for (std::size_t j = i + 1; j < ty.enum_values.size(); ++j)
                    if (ty.enum_values[i] == ty.enum_values[j])
                        errors.push_back({line, where + ": duplicate enum literal " +
                                                    quote_text(ty.enum_values[i])});
            break;
        }
        case V::NumericRange: {
            if (ty.range_min && ty.range_max) {
                double lo = ty.range_min->as_number();
                double hi = ty.range_max->as_number();
                bool ok = lo < hi ||
                          (lo == hi && ty.min_inclusive && ty.max_inclusive);
                if (!ok)
                    errors.push_back(
                        {line, where + ": range bounds are empty (min must be "
                                       "below max)"});
            }
            break;
        }
        case V::Union: {
            if (ty.members.size() < 2)
                errors.push_back(
                    {line, where + ": union must have at least two members"});
            for (const auto& m : ty.members) {
                if (m.variant == V::Union)
                    errors.push_back({line, where + ": nested union"});
                validate_refined_type(m, where, line, errors);
            }
            for (std::size_t i = 0; i < ty.members.size(); ++i)
                for (std::size_t j = i + 1; j < ty.members.size(); ++j)
                    if (ty.members[i].equals(ty.members[j]))
                        errors.push_back(
                            {line, where + ": duplicate union member"});
            break;
        }
        default: break;
    }
}

}  // namespace detail

// Cross-reference and invariant checks; empty result means the spec is sound.
// Parsing already runs this, so hand-built ApiSpec values are the usual input.
inline std::vector<SpecError> validate_spec(const ApiSpec& spec) {
    std::vector<SpecError> errors;
    for (const auto& [ename, entity] : spec.entities) {
        std::string prefix = "entity " + ename;
        if (spec.metrics.count(ename))
            errors.push_back({entity.decl_line,
                              prefix + ": name collides with a metric"});

        for (std::size_t i = 0; i < entity.params.size(); ++i)
            for (std::size_t j = i + 1; j < entity.params.size(); ++j)
                if (entity.params[i].name == entity.params[j].name)
                    errors.push_back({entity.params[j].decl_line,
                                      prefix + ": duplicate param '" +
                                          entity.params[j].name + "'"});
        for (std::size_t i = 0; i < entity.methods.size(); ++i)
            for (std::size_t j = i + 1; j < entity.methods.size(); ++j)
                if (entity.methods[i].name == entity.methods[j].name)
                    errors.push_back({entity.methods[j].decl_line,
                                      prefix + ": duplicate method '" +
                                          entity.methods[j].name + "'"});

        if (entity.kind == EntityKind::Model && !entity.find_method("fit"))
            errors.push_back({entity.decl_line,
                              prefix + ": a model entity must declare a fit "
                                       "method"});

        for (const auto& param : entity.params) {
            std::string where = prefix + ": param " + param.name;
            detail::validate_refined_type(param.ty, where, param.decl_line,
                                          errors);
            if (param.default_value) {
                TypeFit fit = fit_literal(*param.default_value, param.ty);
                if (fit.result == FitResult::OutOfRange)
                    errors.push_back({param.decl_line,
                                      where + ": default violates declared "
                                              "range (" +
                                          describe_type(*fit.against) + ")"});
                else if (fit.result == FitResult::NotInEnum)
                    errors.push_back({param.decl_line,
                                      where + ": default is not one of the "
                                              "declared literals"});
                else if (fit.result != FitResult::Ok)
                    errors.push_back({param.decl_line,
                                      where + ": default has kind " +
                                          std::string(literal_kind_name(
                                              param.default_value->kind)) +
                                          ", expected " +
                                          describe_type(param.ty)});
            }
            if (param.relevant_when) {
                const auto& cond = *param.relevant_when;
                const ParameterSpec* target = entity.find_param(cond.param);
                if (!target) {
                    errors.push_back({param.decl_line,
                                      where + ": relevant_when references "
                                              "unknown parameter '" +
                                          cond.param + "'"});
                } else {
                    TypeFit fit = fit_literal(cond.value, target->ty);
                    if (fit.result == FitResult::KindMismatch)
                        errors.push_back(
                            {param.decl_line,
                             where + ": relevant_when value kind does not "
                                     "match parameter '" +
                                 cond.param + "'"});
                }
            }
        }

        for (const auto& rule : entity.temporal) {
            if (rule.variant == TemporalRule::Variant::MustPrecede) {
                for (const auto* m : {&rule.first, &rule.second})
                    if (!entity.find_method(*m))
                        errors.push_back({rule.decl_line,
                                          prefix + ": order rule references "
                                                   "unknown method '" +
                                              *m + "'"});
            } else {
                if (!entity.find_method(rule.method))
                    errors.push_back({rule.decl_line,
                                      prefix + ": requires_set references "
                                               "unknown method '" +
                                          rule.method + "'"});
                const ParameterSpec* p = entity.find_param(rule.param);
                if (!p) {
                    errors.push_back({rule.decl_line,
                                      prefix + ": requires_set references "
                                               "unknown parameter '" +
                                          rule.param + "'"});
                } else {
                    TypeFit fit = fit_literal(rule.required_value, p->ty);
                    if (fit.result != FitResult::Ok)
                        errors.push_back(
                            {rule.decl_line,
                             prefix + ": requires_set value does not satisfy "
                                      "the type of parameter '" +
                                 rule.param + "'"});
                }
            }
        }
    }
    return errors;
}

// --- parsing ----------------------------------------------------------------

struct SpecParseResult {
    ApiSpec spec;
    std::vector<SpecError> errors;
    bool ok() const { return errors.empty(); }
};

namespace detail {

// Cursor over spec-family tokens. Declarations end at a line break, ';',
// '}' or end of file.
class SpecCursor {
public:
    explicit SpecCursor(const std::vector<Token>& tokens) : toks_(tokens) {}

    const Token& peek() const { return toks_[pos_]; }
    const Token& get() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
    bool at_eof() const { return peek().kind == TokenKind::Eof; }

    void begin_decl() { decl_line_ = peek().span.start_line; }
    int decl_line() const { return decl_line_; }

    bool decl_done() const {
        const Token& t = peek();
        return t.kind == TokenKind::Eof || t.is_punct(";") ||
               t.is_punct("}") || t.span.start_line != decl_line_;
    }

    // Next token, but only while the current declaration continues.
    const Token* peek_in_decl() const { return decl_done() ? nullptr : &peek(); }

    void skip_decl() {
        while (!decl_done()) get();
        if (peek().is_punct(";")) get();
    }

    void end_decl(std::vector<SpecError>& errors) {
        if (!decl_done()) {
            errors.push_back({peek().span.start_line,
                              "unexpected '" + peek().lexeme +
                                  "' after declaration"});
            skip_decl();
            return;
        }
        if (peek().is_punct(";")) get();
    }

private:
    const std::vector<Token>& toks_;
    std::size_t pos_ = 0;
    int decl_line_ = 0;
};

class ApiSpecParser {
public:
    ApiSpecParser(const std::vector<Token>& tokens, std::string source_name)
        : cur_(tokens) {
        result_.spec.source_name = std::move(source_name);
    }

    SpecParseResult run() {
        while (!cur_.at_eof()) {
            cur_.begin_decl();
            const Token& head = cur_.peek();
            if (head.is_word("version")) {
                parse_version();
            } else if (head.is_word("entity")) {
                parse_entity();
            } else if (head.is_word("metric")) {
                parse_metric();
            } else {
                error("expected 'entity', 'metric' or 'version', found '" +
                      head.lexeme + "'");
                cur_.skip_decl();
            }
        }
        auto validation = validate_spec(result_.spec);
        result_.errors.insert(result_.errors.end(), validation.begin(),
                              validation.end());
        return std::move(result_);
    }

private:
    SpecCursor cur_;
    SpecParseResult result_;

    void error(std::string msg) {
        result_.errors.push_back({cur_.peek().span.start_line, std::move(msg)});
    }

    const Token* expect_word(std::string_view what) {
        const Token* t = cur_.peek_in_decl();
        if (!t || t->kind != TokenKind::Identifier) {
            error("expected " + std::string(what));
            return nullptr;
        }
        return &cur_.get();
    }

    bool expect_punct(std::string_view p) {
        const Token* t = cur_.peek_in_decl();
        if (!t || !t->is_punct(p)) {
            error("expected '" + std::string(p) + "'");
            return false;
        }
        cur_.get();
        return true;
    }

    std::optional<Literal> expect_literal() {
        const Token* t = cur_.peek_in_decl();
        if (!t || (t->kind != TokenKind::Text && t->kind != TokenKind::Int &&
                   t->kind != TokenKind::Float && t->kind != TokenKind::Bool)) {
            error("expected a literal");
            return std::nullopt;
        }
        return cur_.get().to_literal();
    }

    void parse_version() {
        cur_.get();  // version
        const Token* t = cur_.peek_in_decl();
        if (!t || t->kind != TokenKind::Text) {
            error("expected version text literal");
            cur_.skip_decl();
            return;
        }
        result_.spec.version = cur_.get().text_value;
        cur_.end_decl(result_.errors);
    }

    void parse_metric() {
        cur_.get();  // metric
        MetricSpec metric;
        metric.decl_line = cur_.decl_line();
        const Token* name = expect_word("metric name");
        if (!name) {
            cur_.skip_decl();
            return;
        }
        metric.name = name->lexeme;
        const Token* taskkw = cur_.peek_in_decl();
        if (!taskkw || !taskkw->is_word("task")) {
            error("expected 'task' after metric name");
            cur_.skip_decl();
            return;
        }
        cur_.get();
        const Token* task = expect_word("'classification' or 'regression'");
        if (!task) {
            cur_.skip_decl();
            return;
        }
        if (task->lexeme == "classification") {
            metric.task = Task::Classification;
        } else if (task->lexeme == "regression") {
            metric.task = Task::Regression;
        } else {
            error("metric task must be 'classification' or 'regression'");
            cur_.skip_decl();
            return;
        }
        cur_.end_decl(result_.errors);
        if (result_.spec.metrics.count(metric.name)) {
            result_.errors.push_back({metric.decl_line,
                                      "duplicate metric '" + metric.name + "'"});
            return;
        }
        result_.spec.metrics.emplace(metric.name, std::move(metric));
    }

    void parse_entity() {
        cur_.get();  // entity
        EntitySpec entity;
        entity.decl_line = cur_.decl_line();
        const Token* name = expect_word("entity name");
        if (!name) {
            cur_.skip_decl();
            return;
        }
        entity.name = name->lexeme;

        const Token* kind = expect_word("'model' or 'transform'");
        if (!kind) {
            cur_.skip_decl();
            return;
        }
        if (kind->lexeme == "model") {
            entity.kind = EntityKind::Model;
        } else if (kind->lexeme == "transform") {
            entity.kind = EntityKind::Transform;
        } else {
            error("entity kind must be 'model' or 'transform'");
            cur_.skip_decl();
            return;
        }

        if (const Token* t = cur_.peek_in_decl(); t && t->is_word("task")) {
            cur_.get();
            const Token* task = expect_word("task name");
            if (!task) {
                cur_.skip_decl();
                return;
            }
            if (task->lexeme == "classification") entity.task = Task::Classification;
            else if (task->lexeme == "regression") entity.task = Task::Regression;
            else if (task->lexeme == "both") entity.task = Task::Both;
            else if (task->lexeme == "none") entity.task = Task::None;
            else {
                error("unknown task '" + task->lexeme + "'");
                cur_.skip_decl();
                return;
            }
        }

        if (!expect_punct("{")) {
            cur_.skip_decl();
            return;
        }
        cur_.end_decl(result_.errors);

        while (true) {
            if (cur_.at_eof()) {
                result_.errors.push_back({entity.decl_line,
                                          "entity '" + entity.name +
                                              "' is missing a closing '}'"});
                break;
            }
            if (cur_.peek().is_punct("}")) {
                cur_.get();
                if (cur_.peek().is_punct(";")) cur_.get();
                break;
            }
            cur_.begin_decl();
            const Token& head = cur_.peek();
            if (head.is_word("param")) parse_param(entity);
            else if (head.is_word("method")) parse_method(entity);
            else if (head.is_word("order")) parse_order(entity);
            else if (head.is_word("requires_set")) parse_requires_set(entity);
            else {
                error("expected 'param', 'method', 'order' or 'requires_set', "
                      "found '" + head.lexeme + "'");
                cur_.skip_decl();
            }
        }

        if (result_.spec.entities.count(entity.name)) {
            result_.errors.push_back({entity.decl_line,
                                      "duplicate entity '" + entity.name + "'"});
            return;
        }
        result_.spec.entities.emplace(entity.name, std::move(entity));
    }

    void parse_param(EntitySpec& entity) {
        cur_.get();  // param
        ParameterSpec param;
        param.decl_line = cur_.decl_line();
        const Token* name = expect_word("parameter name");
        if (!name) {
            cur_.skip_decl();
            return;
        }
        param.name = name->lexeme;
        if (!expect_punct(":")) {
            cur_.skip_decl();
            return;
        }
        auto ty = parse_type_expr();
        if (!ty) {
            cur_.skip_decl();
            return;
        }
        param.ty = std::move(*ty);

        if (const Token* t = cur_.peek_in_decl(); t && t->is_punct("=")) {
            cur_.get();
            auto def = expect_literal();
            if (!def) {
                cur_.skip_decl();
                return;
            }
            param.default_value = std::move(*def);
        }

        if (const Token* t = cur_.peek_in_decl(); t && t->is_word("relevant_when")) {
            cur_.get();
            Condition cond;
            const Token* target = expect_word("parameter name");
            if (!target) {
                cur_.skip_decl();
                return;
            }
            cond.param = target->lexeme;
            const Token* op = cur_.peek_in_decl();
            if (!op || (!op->is_punct("==") && !op->is_punct("!="))) {
                error("expected '==' or '!=' in relevant_when");
                cur_.skip_decl();
                return;
            }
            cond.op = cur_.get().is_punct("==") ? Condition::Op::Eq
                                                : Condition::Op::Ne;
            auto value = expect_literal();
            if (!value) {
                cur_.skip_decl();
                return;
            }
            cond.value = std::move(*value);
            param.relevant_when = std::move(cond);
        }

        if (const Token* t = cur_.peek_in_decl();
            t && t->is_word("context_warning")) {
            cur_.get();
            if (!expect_punct("(")) {
                cur_.skip_decl();
                return;
            }
            ContextWarning warn;
            const Token* tag = expect_word("context tag");
            if (!tag) {
                cur_.skip_decl();
                return;
            }
            warn.tag = tag->lexeme;
            if (!expect_punct(",")) {
                cur_.skip_decl();
                return;
            }
            const Token* msg = cur_.peek_in_decl();
            if (!msg || msg->kind != TokenKind::Text) {
                error("expected warning message text");
                cur_.skip_decl();
                return;
            }
            warn.message = cur_.get().text_value;
            if (!expect_punct(")")) {
                cur_.skip_decl();
                return;
            }
            param.context_warning = std::move(warn);
        }

        cur_.end_decl(result_.errors);
        entity.params.push_back(std::move(param));
    }

    std::optional<RefinedType> parse_type_expr() {
        std::vector<RefinedType> members;
        while (true) {
            auto atom = parse_type_atom();
            if (!atom) return std::nullopt;
            members.push_back(std::move(*atom));
            const Token* t = cur_.peek_in_decl();
            if (t && t->is_punct("|")) {
                cur_.get();
                continue;
            }
            break;
        }
        if (members.size() == 1) return std::move(members.front());
        RefinedType u;
        u.variant = RefinedType::Variant::Union;
        u.members = std::move(members);
        return u;
    }

    std::optional<RefinedType> parse_type_atom() {
        const Token* head = cur_.peek_in_decl();
        if (!head || head->kind != TokenKind::Identifier) {
            error("expected a type");
            return std::nullopt;
        }
        std::string word = cur_.get().lexeme;

        if (word == "enum") return parse_enum_type();
        if (word == "callable") return parse_callable_type();

        auto prim = prim_kind_from(word);
        if (!prim) {
            error("unknown type keyword '" + word + "'");
            return std::nullopt;
        }
        const Token* t = cur_.peek_in_decl();
        bool numeric = *prim == PrimKind::Int || *prim == PrimKind::Float;
        if (numeric && t && t->is_punct("("))
            return parse_range_type(*prim);
        return RefinedType::primitive(*prim);
    }

    std::optional<RefinedType> parse_enum_type() {
        RefinedType ty;
        ty.variant = RefinedType::Variant::EnumLiterals;
        if (!expect_punct("(")) return std::nullopt;
        if (const Token* t = cur_.peek_in_decl(); t && t->is_punct(")")) {
            cur_.get();
            error("enum must list at least one literal");
            return std::nullopt;
        }
        while (true) {
            const Token* lit = cur_.peek_in_decl();
            if (!lit || lit->kind != TokenKind::Text) {
                error("expected text literal in enum");
                return std::nullopt;
            }
            ty.enum_values.push_back(cur_.get().text_value);
            const Token* t = cur_.peek_in_decl();
            if (t && t->is_punct(",")) {
                cur_.get();
                continue;
            }
            break;
        }
        if (!expect_punct(")")) return std::nullopt;
        return ty;
    }

    std::optional<RefinedType> parse_callable_type() {
        RefinedType ty;
        ty.variant = RefinedType::Variant::CallableSig;
        if (!expect_punct("(")) return std::nullopt;
        const Token* kw = expect_word("'arity'");
        if (!kw || kw->lexeme != "arity") {
            error("callable requires 'arity'");
            return std::nullopt;
        }
        if (!expect_punct("=")) return std::nullopt;
        const Token* n = cur_.peek_in_decl();
        if (!n || n->kind != TokenKind::Int || n->int_value < 0) {
            error("callable arity must be a non-negative int");
            return std::nullopt;
        }
        ty.callable_arity = cur_.get().int_value;
        if (const Token* t = cur_.peek_in_decl(); t && t->is_punct(",")) {
            cur_.get();
            const Token* notekw = expect_word("'note'");
            if (!notekw || notekw->lexeme != "note") {
                error("expected 'note' in callable");
                return std::nullopt;
            }
            if (!expect_punct("=")) return std::nullopt;
            const Token* note = cur_.peek_in_decl();
            if (!note || note->kind != TokenKind::Text) {
                error("callable note must be a text literal");
                return std::nullopt;
            }
            ty.callable_note = cur_.get().text_value;
        }
        if (!expect_punct(")")) return std::nullopt;
        return ty;
    }

    std::optional<RefinedType> parse_range_type(PrimKind prim) {
        RefinedType ty;
        ty.variant = RefinedType::Variant::NumericRange;
        ty.prim = prim;
        cur_.get();  // (
        bool any = false;
        while (true) {
            const Token* key = cur_.peek_in_decl();
            if (!key || key->kind != TokenKind::Identifier) {
                error("expected 'min' or 'max' bound");
                return std::nullopt;
            }
            std::string bound = cur_.get().lexeme;
            if (!expect_punct("=")) return std::nullopt;
            const Token* val = cur_.peek_in_decl();
            if (!val || (val->kind != TokenKind::Int &&
                         val->kind != TokenKind::Float)) {
                error("expected numeric bound value");
                return std::nullopt;
            }
            Literal value = cur_.get().to_literal();
            if (bound == "min") {
                ty.range_min = value;
                ty.min_inclusive = true;
            } else if (bound == "max") {
                ty.range_max = value;
                ty.max_inclusive = true;
            } else if (bound == "min_exclusive") {
                ty.range_min = value;
                ty.min_inclusive = false;
            } else if (bound == "max_exclusive") {
                ty.range_max = value;
                ty.max_inclusive = false;
            } else {
                error("unknown range bound '" + bound + "'");
                return std::nullopt;
            }
            any = true;
            const Token* t = cur_.peek_in_decl();
            if (t && t->is_punct(",")) {
                cur_.get();
                continue;
            }
            break;
        }
        if (!any) {
            error("range type requires at least one bound");
            return std::nullopt;
        }
        if (!expect_punct(")")) return std::nullopt;
        return ty;
    }

    void parse_method(EntitySpec& entity) {
        cur_.get();  // method
        MethodSpec method;
        method.decl_line = cur_.decl_line();
        const Token* name = expect_word("method name");
        if (!name) {
            cur_.skip_decl();
            return;
        }
        method.name = name->lexeme;
        if (!expect_punct("(")) {
            cur_.skip_decl();
            return;
        }
        if (const Token* t = cur_.peek_in_decl(); t && t->is_punct(")")) {
            cur_.get();
        } else {
            while (true) {
                const Token* kind = expect_word("parameter kind");
                if (!kind) {
                    cur_.skip_decl();
                    return;
                }
                auto prim = prim_kind_from(kind->lexeme);
                if (!prim) {
                    error("unknown kind '" + kind->lexeme + "'");
                    cur_.skip_decl();
                    return;
                }
                method.params.push_back(*prim);
                const Token* t = cur_.peek_in_decl();
                if (t && t->is_punct(",")) {
                    cur_.get();
                    continue;
                }
                break;
            }
            if (!expect_punct(")")) {
                cur_.skip_decl();
                return;
            }
        }
        if (const Token* t = cur_.peek_in_decl(); t && t->is_punct("->")) {
            cur_.get();
            const Token* kind = expect_word("return kind");
            if (!kind) {
                cur_.skip_decl();
                return;
            }
            auto prim = prim_kind_from(kind->lexeme);
            if (!prim) {
                error("unknown kind '" + kind->lexeme + "'");
                cur_.skip_decl();
                return;
            }
            method.return_kind = *prim;
        }
        cur_.end_decl(result_.errors);
        entity.methods.push_back(std::move(method));
    }

    void parse_order(EntitySpec& entity) {
        cur_.get();  // order
        TemporalRule rule;
        rule.variant = TemporalRule::Variant::MustPrecede;
        rule.decl_line = cur_.decl_line();
        const Token* first = expect_word("method name");
        if (!first) {
            cur_.skip_decl();
            return;
        }
        rule.first = first->lexeme;
        const Token* before = cur_.peek_in_decl();
        if (!before || !before->is_word("before")) {
            error("expected 'before'");
            cur_.skip_decl();
            return;
        }
        cur_.get();
        const Token* second = expect_word("method name");
        if (!second) {
            cur_.skip_decl();
            return;
        }
        rule.second = second->lexeme;
        cur_.end_decl(result_.errors);
        entity.temporal.push_back(std::move(rule));
    }

    void parse_requires_set(EntitySpec& entity) {
        cur_.get();  // requires_set
        TemporalRule rule;
        rule.variant = TemporalRule::Variant::RequireSetBefore;
        rule.decl_line = cur_.decl_line();
        const Token* param = expect_word("parameter name");
        if (!param) {
            cur_.skip_decl();
            return;
        }
        rule.param = param->lexeme;
        if (!expect_punct("==")) {
            cur_.skip_decl();
            return;
        }
        auto value = expect_literal();
        if (!value) {
            cur_.skip_decl();
            return;
        }
        rule.required_value = std::move(*value);
        const Token* before = cur_.peek_in_decl();
        if (!before || !before->is_word("before")) {
            error("expected 'before'");
            cur_.skip_decl();
            return;
        }
        cur_.get();
        const Token* method = expect_word("method name");
        if (!method) {
            cur_.skip_decl();
            return;
        }
        rule.method = method->lexeme;
        cur_.end_decl(result_.errors);
        entity.temporal.push_back(std::move(rule));
    }
};

}  // namespace detail

// Parses .mlspec source. A successful result always satisfies validate_spec.
inline SpecParseResult parse_api_spec(std::string_view source,
                                      std::string source_name = "") {
    LexResult lex = tokenize_spec_family(source, source_name);
    if (!lex.ok()) {
        SpecParseResult r;
        r.spec.source_name = std::move(source_name);
        r.errors.push_back({lex.error->span.start_line, lex.error->message});
        return r;
    }
    return detail::ApiSpecParser(lex.tokens, std::move(source_name)).run();
}

inline const EntitySpec* lookup_entity(const ApiSpec& spec,
                                       std::string_view name) {
    auto it = spec.entities.find(std::string(name));
    return it == spec.entities.end() ? nullptr : &it->second;
}

inline const MetricSpec* lookup_metric(const ApiSpec& spec,
                                       std::string_view name) {
    auto it = spec.metrics.find(std::string(name));
    return it == spec.metrics.end() ? nullptr : &it->second;
}

// --- canonical printer --------------------------------------------------

namespace detail {

inline std::string print_type(const RefinedType& ty) {
    using V = RefinedType::Variant;
    switch (ty.variant) {
        case V::Primitive: return std::string(prim_kind_name(ty.prim));
        case V::EnumLiterals: {
            std::string out = "enum(";
            for (std::size_t i = 0; i < ty.enum_values.size(); ++i) {
                if (i) out += ",";
                out += quote_text(ty.enum_values[i]);
            }
            return out + ")";
        }
        case V::NumericRange: {
            std::string out = std::string(prim_kind_name(ty.prim)) + "(";
            bool first = true;
            if (ty.range_min) {
                out += std::string(ty.min_inclusive ? "min" : "min_exclusive") +
                       "=" + ty.range_min->to_string();
                first = false;
            }
            if (ty.range_max) {
                if (!first) out += ", ";
                out += std::string(ty.max_inclusive ? "max" : "max_exclusive") +
                       "=" + ty.range_max->to_string();
            }
            return out + ")";
        }
        case V::CallableSig: {
            std::string out =
                "callable(arity=" + std::to_string(ty.callable_arity);
            if (!ty.callable_note.empty())
                out += ", note=" + quote_text(ty.callable_note);
            return out + ")";
        }
        case V::Union: {
            std::string out;
            for (std::size_t i = 0; i < ty.members.size(); ++i) {
                if (i) out += " | ";
                out += print_type(ty.members[i]);
            }
            return out;
        }
    }
    return "";
}

}  // namespace detail

// Canonical text form; parse_api_spec(print_spec(s)) reproduces s.
inline std::string print_spec(const ApiSpec& spec) {
    std::string out;
    if (!spec.version.empty())
        out += "version " + quote_text(spec.version) + "\n";
    for (const auto& [name, entity] : spec.entities) {
        out += "entity " + name + " " +
               (entity.kind == EntityKind::Model ? "model" : "transform") +
               " task " + std::string(task_name(entity.task)) + " {\n";
        for (const auto& param : entity.params) {
            out += "  param " + param.name + ": " + detail::print_type(param.ty);
            if (param.default_value)
                out += " = " + param.default_value->to_string();
            if (param.relevant_when)
                out += " relevant_when " + param.relevant_when->param + " " +
                       param.relevant_when->op_text() + " " +
                       param.relevant_when->value.to_string();
            if (param.context_warning)
                out += " context_warning(" + param.context_warning->tag + ", " +
                       quote_text(param.context_warning->message) + ")";
            out += "\n";
        }
        for (const auto& method : entity.methods) {
            out += "  method " + method.name + "(";
            for (std::size_t i = 0; i < method.params.size(); ++i) {
                if (i) out += ", ";
                out += std::string(prim_kind_name(method.params[i]));
            }
            out += ")";
            if (method.return_kind)
                out += " -> " + std::string(prim_kind_name(*method.return_kind));
            out += "\n";
        }
        for (const auto& rule : entity.temporal) {
            if (rule.variant == TemporalRule::Variant::MustPrecede)
                out += "  order " + rule.first + " before " + rule.second + "\n";
            else
                out += "  requires_set " + rule.param + " == " +
                       rule.required_value.to_string() + " before " +
                       rule.method + "\n";
        }
        out += "}\n";
    }
    for (const auto& [name, metric] : spec.metrics)
        out += "metric " + name + " task " +
               std::string(task_name(metric.task)) + "\n";
    return out;
}

// --- merging ----------------------------------------------------------------

struct MergeResult {
    std::optional<ApiSpec> spec;
    std::optional<SpecError> error;
    bool ok() const { return spec.has_value(); }
};

// Union of entities and metrics; deterministic and order-independent for
// disjoint inputs. The empty spec is the identity element.
inline MergeResult merge_specs(const std::vector<ApiSpec>& specs) {
    ApiSpec merged;
    std::map<std::string, std::string> entity_origin;
    std::map<std::string, std::string> metric_origin;
    std::vector<std::string> versions;

    auto describe = [](const ApiSpec& s, std::size_t index) {
        return s.source_name.empty() ? "input #" + std::to_string(index + 1)
                                     : s.source_name;
    };

    for (std::size_t i = 0; i < specs.size(); ++i) {
        const ApiSpec& s = specs[i];
        std::string origin = describe(s, i);
        for (const auto& [name, entity] : s.entities) {
            if (auto it = entity_origin.find(name); it != entity_origin.end())
                return {std::nullopt,
                        SpecError{entity.decl_line,
                                  "entity '" + name + "' defined in both " +
                                      it->second + " and " + origin}};
            entity_origin.emplace(name, origin);
            merged.entities.emplace(name, entity);
        }
        for (const auto& [name, metric] : s.metrics) {
            if (auto it = metric_origin.find(name); it != metric_origin.end())
                return {std::nullopt,
                        SpecError{metric.decl_line,
                                  "metric '" + name + "' defined in both " +
                                      it->second + " and " + origin}};
            metric_origin.emplace(name, origin);
            merged.metrics.emplace(name, metric);
        }
        if (!s.version.empty() &&
            std::find(versions.begin(), versions.end(), s.version) ==
                versions.end())
            versions.push_back(s.version);
    }
    std::sort(versions.begin(), versions.end());
    for (std::size_t i = 0; i < versions.size(); ++i)
        merged.version += (i ? "+" : "") + versions[i];
    merged.source_name = "merged";
    return {std::move(merged), std::nullopt};
}

}  // namespace mlguard
