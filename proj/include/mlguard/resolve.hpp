#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mlguard/api_spec.hpp"
#include "mlguard/ast.hpp"
#include "mlguard/diagnostics.hpp"
#include "mlguard/suggest.hpp"

namespace mlguard {

// Dataset roles are assigned exactly by Load (raw) and Split (train/val/test)
// and travel through Apply unchanged.
enum class Role { Raw, Train, Val, Test };

inline std::string_view role_name(Role r) {
    switch (r) {
        case Role::Raw: return "raw";
        case Role::Train: return "train";
        case Role::Val: return "val";
        case Role::Test: return "test";
    }
    return "?";
}

struct DatasetState {
    Role role = Role::Raw;
    std::vector<int> provenance;  // transform instances, in apply order
    std::string origin_path;      // path of the originating load statement
    int origin_load = -1;         // statement index of that load
};

struct ResolvedArg {
    std::string name;
    SourceSpan name_span;
    Literal value;
};

struct ModelInstance {
    int decl_stmt = -1;
    std::string var;
    std::string entity;
    const EntitySpec* spec = nullptr;  // null when the entity is unknown
    std::vector<ResolvedArg> ctor_args;

    const ResolvedArg* find_arg(std::string_view name) const {
        for (const auto& a : ctor_args)
            if (a.name == name) return &a;
        return nullptr;
    }
};

struct TransformInstance {
    int decl_stmt = -1;
    std::string var;
    std::string entity;
    const EntitySpec* spec = nullptr;
    std::vector<ResolvedArg> args;
    std::optional<DatasetState> fit_on;
    SourceSpan fit_on_span;

    const ResolvedArg* find_arg(std::string_view name) const {
        for (const auto& a : args)
            if (a.name == name) return &a;
        return nullptr;
    }
};

// What a pipeline variable refers to at some program point.
struct Binding {
    enum class Kind { Dataset, Model, Transform };
    Kind kind = Kind::Dataset;
    DatasetState dataset;
    int index = -1;  // models / transforms table index
};

// Per-statement resolution results; indices refer into the instance tables.
struct StmtInfo {
    int model = -1;
    int transform = -1;
    std::optional<DatasetState> dataset;  // referenced dataset, at this point
    const MetricSpec* metric = nullptr;
};

struct ResolvedProgram {
    const Pipeline* ast = nullptr;
    std::vector<StmtInfo> stmt_info;             // parallel to ast->statements
    std::vector<ModelInstance> models;
    std::vector<TransformInstance> transforms;
    std::map<std::string, Binding> bindings;     // final environment
};

struct ResolveResult {
    ResolvedProgram program;
    std::vector<Diagnostic> diagnostics;
};

namespace detail {

class Resolver {
public:
    Resolver(const Pipeline& ast, const ApiSpec& spec)
        : ast_(ast), spec_(spec) {
        result_.program.ast = &ast;
    }

    ResolveResult run() {
        for (std::size_t i = 0; i < ast_.statements.size(); ++i) {
            index_ = static_cast<int>(i);
            info_ = StmtInfo{};
            std::visit([this](const auto& node) { resolve_stmt(node); },
                       ast_.statements[i].node);
            result_.program.stmt_info.push_back(info_);
        }
        result_.program.bindings = env_;
        return std::move(result_);
    }

private:
    const Pipeline& ast_;
    const ApiSpec& spec_;
    ResolveResult result_;
    std::map<std::string, Binding> env_;
    int index_ = 0;
    StmtInfo info_;

    void report(std::string code, SourceSpan span, std::string message) {
        result_.diagnostics.push_back(make_diagnostic(
            std::move(code), Severity::Error, std::move(span),
            std::move(message)));
    }

    std::vector<std::string> bound_vars() const {
        std::vector<std::string> names;
        for (const auto& [name, _] : env_) names.push_back(name);
        return names;
    }

    std::vector<std::string> entity_names() const {
        std::vector<std::string> names;
        for (const auto& [name, _] : spec_.entities) names.push_back(name);
        return names;
    }

    std::vector<std::string> metric_names() const {
        std::vector<std::string> names;
        for (const auto& [name, _] : spec_.metrics) names.push_back(name);
        return names;
    }

    const Binding* lookup_var(const std::string& name, SourceSpan span,
                              Binding::Kind want, std::string_view wanted) {
        auto it = env_.find(name);
        if (it == env_.end()) {
            Diagnostic d = make_diagnostic(
                "E-NAME-002", Severity::Error, span,
                "variable '" + name + "' is used before it is bound");
            attach_suggestions(d, span, name, bound_vars(), false);
            result_.diagnostics.push_back(std::move(d));
            return nullptr;
        }
        if (it->second.kind != want) {
            static constexpr std::string_view kind_names[] = {
                "a dataset", "a model", "a transform"};
            report("E-NAME-006", span,
                   "'" + name + "' is bound to " +
                       std::string(
                           kind_names[static_cast<int>(it->second.kind)]) +
                       ", expected " + std::string(wanted));
            return nullptr;
        }
        return &it->second;
    }

    const DatasetState* lookup_dataset(const std::string& name,
                                       SourceSpan span) {
        const Binding* b =
            lookup_var(name, span, Binding::Kind::Dataset, "a dataset variable");
        return b ? &b->dataset : nullptr;
    }

    void bind_dataset(const std::string& var, DatasetState state) {
        Binding b;
        b.kind = Binding::Kind::Dataset;
        b.dataset = std::move(state);
        env_[var] = std::move(b);
    }

    // Entity lookup shared by model and transform declarations.
    const EntitySpec* lookup_decl_entity(const std::string& name,
                                         SourceSpan span,
                                         EntityKind expected) {
        const EntitySpec* entity = lookup_entity(spec_, name);
        if (!entity) {
            Diagnostic d = make_diagnostic(
                "E-NAME-001", Severity::Error, span,
                "unknown entity '" + name + "'");
            attach_suggestions(d, span, name, entity_names(), false);
            result_.diagnostics.push_back(std::move(d));
            return nullptr;
        }
        if (entity->kind != expected) {
            report("E-NAME-006", span,
                   "entity '" + name + "' is a " +
                       (entity->kind == EntityKind::Model ? "model"
                                                          : "transform") +
                       ", expected a " +
                       (expected == EntityKind::Model ? "model"
                                                      : "transform"));
        }
        return entity;
    }

    std::vector<ResolvedArg> resolve_args(const std::vector<Arg>& args,
                                          const EntitySpec* entity) {
        std::vector<ResolvedArg> resolved;
        for (const auto& arg : args) {
            bool duplicate = false;
            for (const auto& seen : resolved)
                if (seen.name == arg.name) duplicate = true;
            if (duplicate) {
                report("E-NAME-007", arg.name_span,
                       "duplicate argument '" + arg.name + "'");
                continue;
            }
            if (entity && !entity->find_param(arg.name)) {
                std::vector<std::string> params;
                for (const auto& p : entity->params) params.push_back(p.name);
                Diagnostic d = make_diagnostic(
                    "E-NAME-003", Severity::Error, arg.name_span,
                    "entity '" + entity->name + "' has no parameter '" +
                        arg.name + "'");
                attach_suggestions(d, arg.name_span, arg.name, params, false);
                result_.diagnostics.push_back(std::move(d));
                continue;
            }
            resolved.push_back({arg.name, arg.name_span, arg.value});
        }
        return resolved;
    }

    void resolve_stmt(const LoadStmt& s) {
        DatasetState state;
        state.role = Role::Raw;
        state.origin_path = s.path;
        state.origin_load = index_;
        bind_dataset(s.var, std::move(state));
    }

    void resolve_stmt(const SplitStmt& s) {
        const DatasetState* source = lookup_dataset(s.source, s.source_span);
        DatasetState base;
        if (source) {
            base = *source;
            info_.dataset = *source;
        }
        const std::pair<const std::string*, Role> outputs[] = {
            {&s.train_var, Role::Train},
            {&s.val_var, Role::Val},
            {&s.test_var, Role::Test},
        };
        for (const auto& [var, role] : outputs) {
            DatasetState state = base;
            state.role = role;
            bind_dataset(*var, std::move(state));
        }
    }

    void resolve_stmt(const TransformDeclStmt& s) {
        TransformInstance instance;
        instance.decl_stmt = index_;
        instance.var = s.var;
        instance.entity = s.entity;
        instance.spec =
            lookup_decl_entity(s.entity, s.entity_span, EntityKind::Transform);
        instance.args = resolve_args(s.args, instance.spec);
        if (const DatasetState* ds = lookup_dataset(s.fit_on, s.fit_on_span)) {
            instance.fit_on = *ds;
            info_.dataset = *ds;
        }
        instance.fit_on_span = s.fit_on_span;
        info_.transform = static_cast<int>(result_.program.transforms.size());
        result_.program.transforms.push_back(std::move(instance));
        Binding b;
        b.kind = Binding::Kind::Transform;
        b.index = info_.transform;
        env_[s.var] = std::move(b);
    }

    void resolve_stmt(const ApplyStmt& s) {
        const Binding* t = lookup_var(s.transform, s.transform_span,
                                      Binding::Kind::Transform,
                                      "a transform variable");
        const DatasetState* ds = lookup_dataset(s.dataset, s.dataset_span);
        if (t) info_.transform = t->index;
        if (ds) {
            info_.dataset = *ds;
            DatasetState out = *ds;
            if (t) out.provenance.push_back(t->index);
            bind_dataset(s.var, std::move(out));
        }
    }

    void resolve_stmt(const ModelDeclStmt& s) {
        ModelInstance instance;
        instance.decl_stmt = index_;
        instance.var = s.var;
        instance.entity = s.entity;
        instance.spec =
            lookup_decl_entity(s.entity, s.entity_span, EntityKind::Model);
        instance.ctor_args = resolve_args(s.args, instance.spec);
        info_.model = static_cast<int>(result_.program.models.size());
        result_.program.models.push_back(std::move(instance));
        Binding b;
        b.kind = Binding::Kind::Model;
        b.index = info_.model;
        env_[s.var] = std::move(b);
    }

    void resolve_stmt(const SetParamStmt& s) {
        const Binding* m = lookup_var(s.model, s.model_span,
                                      Binding::Kind::Model,
                                      "a model variable");
        if (!m) return;
        info_.model = m->index;
        const EntitySpec* entity = result_.program.models[m->index].spec;
        if (entity && !entity->find_param(s.param)) {
            std::vector<std::string> params;
            for (const auto& p : entity->params) params.push_back(p.name);
            Diagnostic d = make_diagnostic(
                "E-NAME-003", Severity::Error, s.param_span,
                "entity '" + entity->name + "' has no parameter '" + s.param +
                    "'");
            attach_suggestions(d, s.param_span, s.param, params, false);
            result_.diagnostics.push_back(std::move(d));
        }
    }

    void resolve_stmt(const FitStmt& s) {
        const Binding* m = lookup_var(s.model, s.model_span,
                                      Binding::Kind::Model,
                                      "a model variable");
        if (m) {
            info_.model = m->index;
            const EntitySpec* entity = result_.program.models[m->index].spec;
            if (entity && !entity->find_method("fit"))
                report("E-NAME-004", s.model_span,
                       "entity '" + entity->name + "' has no method 'fit'");
        }
        if (const DatasetState* ds = lookup_dataset(s.dataset, s.dataset_span))
            info_.dataset = *ds;
    }

    void resolve_stmt(const CallStmt& s) {
        const Binding* m = lookup_var(s.model, s.model_span,
                                      Binding::Kind::Model,
                                      "a model variable");
        if (m) {
            info_.model = m->index;
            const EntitySpec* entity = result_.program.models[m->index].spec;
            if (entity && !entity->find_method(s.method)) {
                std::vector<std::string> methods;
                for (const auto& method : entity->methods)
                    methods.push_back(method.name);
                Diagnostic d = make_diagnostic(
                    "E-NAME-004", Severity::Error, s.method_span,
                    "entity '" + entity->name + "' has no method '" +
                        s.method + "'");
                attach_suggestions(d, s.method_span, s.method, methods, false);
                result_.diagnostics.push_back(std::move(d));
            }
        }
        if (const DatasetState* ds = lookup_dataset(s.dataset, s.dataset_span))
            info_.dataset = *ds;
    }

    void resolve_stmt(const EvaluateStmt& s) {
        info_.metric = lookup_metric(spec_, s.metric);
        if (!info_.metric) {
            Diagnostic d = make_diagnostic(
                "E-NAME-005", Severity::Error, s.metric_span,
                "unknown metric '" + s.metric + "'");
            attach_suggestions(d, s.metric_span, s.metric, metric_names(),
                               false);
            result_.diagnostics.push_back(std::move(d));
        }
        if (const Binding* m = lookup_var(s.model, s.model_span,
                                          Binding::Kind::Model,
                                          "a model variable"))
            info_.model = m->index;
        if (const DatasetState* ds = lookup_dataset(s.dataset, s.dataset_span))
            info_.dataset = *ds;
    }

    void resolve_stmt(const RequireStmt& s) {
        info_.metric = lookup_metric(spec_, s.metric);
        if (!info_.metric) {
            Diagnostic d = make_diagnostic(
                "E-NAME-005", Severity::Error, s.metric_span,
                "unknown metric '" + s.metric + "'");
            attach_suggestions(d, s.metric_span, s.metric, metric_names(),
                               false);
            result_.diagnostics.push_back(std::move(d));
        }
    }
};

}  // namespace detail

// Resolves names against a spec, assigning dataset roles, tracking transform
// provenance and collecting model/transform instances. Resolution continues
// past errors so later statements still check.
inline ResolveResult resolve(const Pipeline& ast, const ApiSpec& spec) {
    return detail::Resolver(ast, spec).run();
}

}  // namespace mlguard
