#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mlguard/api_spec.hpp"
#include "mlguard/ast.hpp"
#include "mlguard/diagnostics.hpp"
#include "mlguard/profile.hpp"
#include "mlguard/resolve.hpp"
#include "mlguard/suggest.hpp"

namespace mlguard {

// Test hook: each analysis pass can be disabled individually; disabling a
// pass removes exactly that pass's diagnostic codes from the report.
enum PassBit : unsigned {
    kPassTypes = 1u << 0,
    kPassDependencies = 1u << 1,
    kPassTemporal = 1u << 2,
    kPassContext = 1u << 3,
    kPassBestPractices = 1u << 4,
    kAllPasses = 0x1fu,
};

struct CheckOptions {
    std::set<std::string> contexts;
    std::vector<DataProfile> profiles;
    bool strict = false;
    unsigned passes = kAllPasses;
};

namespace detail {

// Program-order record of everything that happens to one model instance.
struct ModelHistory {
    struct SetEvent {
        int stmt;
        std::string param;
        Literal value;
        SourceSpan span;  // of the parameter name
    };
    struct CallEvent {
        int stmt;
        std::string method;
        SourceSpan span;  // of the calling statement
    };
    std::vector<SetEvent> sets;
    std::vector<CallEvent> calls;
    int first_use = std::numeric_limits<int>::max();  // fit/call/evaluate
};

inline std::vector<ModelHistory> collect_model_histories(
    const ResolvedProgram& p) {
    std::vector<ModelHistory> histories(p.models.size());
    const auto& stmts = p.ast->statements;
    for (std::size_t i = 0; i < stmts.size(); ++i) {
        int m = p.stmt_info[i].model;
        if (m < 0) continue;
        ModelHistory& h = histories[m];
        int stmt = static_cast<int>(i);
        if (const auto* set = stmts[i].as<SetParamStmt>()) {
            h.sets.push_back({stmt, set->param, set->value, set->param_span});
        } else if (stmts[i].as<FitStmt>()) {
            h.calls.push_back({stmt, "fit", stmts[i].span});
            h.first_use = std::min(h.first_use, stmt);
        } else if (const auto* call = stmts[i].as<CallStmt>()) {
            h.calls.push_back({stmt, call->method, stmts[i].span});
            h.first_use = std::min(h.first_use, stmt);
        } else if (stmts[i].as<EvaluateStmt>()) {
            h.first_use = std::min(h.first_use, stmt);
        }
    }
    return histories;
}

// Value of a parameter just before statement `at`: constructor argument,
// else the last preceding SetParam, else the declared default.
inline std::optional<Literal> value_before(const ModelInstance& model,
                                           const ModelHistory& history,
                                           std::string_view param, int at) {
    std::optional<Literal> value;
    if (const ResolvedArg* arg = model.find_arg(param)) value = arg->value;
    for (const auto& set : history.sets) {
        if (set.stmt >= at) break;
        if (set.param == param) value = set.value;
    }
    if (!value && model.spec) {
        if (const ParameterSpec* ps = model.spec->find_param(param);
            ps && ps->default_value)
            value = *ps->default_value;
    }
    return value;
}

// Effective value for dependency conditions: explicit constructor argument,
// else the last SetParam preceding the model's first use, else the default.
inline std::optional<Literal> effective_value(const ModelInstance& model,
                                              const ModelHistory& history,
                                              std::string_view param) {
    return value_before(model, history, param, history.first_use);
}

}  // namespace detail

// --- refined type checking (E-TYPE-*) ---------------------------------------

namespace detail {

inline void check_literal_against(const ParameterSpec& param,
                                  const std::string& entity_name,
                                  const Literal& value,
                                  std::vector<Diagnostic>& out) {
    TypeFit fit = fit_literal(value, param.ty);
    if (fit.result == FitResult::Ok) return;
    std::string prefix = "invalid value " + value.to_string() +
                         " for parameter " + param.name + " of " + entity_name;
    switch (fit.result) {
        case FitResult::NotInEnum: {
            Diagnostic d = make_diagnostic(
                "E-TYPE-001", Severity::Error, value.span,
                prefix + ": must be " + describe_type(param.ty));
            attach_suggestions(d, value.span, value.text_value,
                               enum_candidates(param.ty), true);
            if (d.suggestions.empty())
                d.message += "; no close match among the valid literals";
            out.push_back(std::move(d));
            break;
        }
        case FitResult::OutOfRange:
            out.push_back(make_diagnostic(
                "E-TYPE-002", Severity::Error, value.span,
                prefix + ": must be " + describe_type(*fit.against)));
            break;
        default:
            out.push_back(make_diagnostic(
                "E-TYPE-003", Severity::Error, value.span,
                prefix + ": has kind " +
                    std::string(literal_kind_name(value.kind)) +
                    ", expected " + describe_type(param.ty)));
    }
}

}  // namespace detail

// Checks every argument literal against its parameter's refined type, split
// ratios against the unit interval, and call statements against method
// signatures.
inline std::vector<Diagnostic> check_types(const ResolvedProgram& p,
                                           const ApiSpec& spec) {
    (void)spec;
    std::vector<Diagnostic> out;
    auto check_args = [&](const std::vector<ResolvedArg>& args,
                          const EntitySpec* entity) {
        if (!entity) return;
        for (const auto& arg : args) {
            const ParameterSpec* param = entity->find_param(arg.name);
            if (!param) continue;  // resolve already reported E-NAME-003
            detail::check_literal_against(*param, entity->name, arg.value,
                                          out);
        }
    };

    for (const auto& model : p.models) check_args(model.ctor_args, model.spec);
    for (const auto& transform : p.transforms)
        check_args(transform.args, transform.spec);

    const auto& stmts = p.ast->statements;
    for (std::size_t i = 0; i < stmts.size(); ++i) {
        if (const auto* set = stmts[i].as<SetParamStmt>()) {
            int m = p.stmt_info[i].model;
            const EntitySpec* entity = m >= 0 ? p.models[m].spec : nullptr;
            if (!entity) continue;
            if (const ParameterSpec* param = entity->find_param(set->param))
                detail::check_literal_against(*param, entity->name,
                                              set->value, out);
        } else if (const auto* split = stmts[i].as<SplitStmt>()) {
            for (int r = 0; r < 3; ++r) {
                double ratio = split->ratios[r];
                if (ratio < 0.0 || ratio > 1.0)
                    out.push_back(make_diagnostic(
                        "E-TYPE-002", Severity::Error, split->ratio_spans[r],
                        "split ratio " + format_float(ratio) +
                            " is invalid: must be a float between 0 and 1"));
            }
        } else if (const auto* call = stmts[i].as<CallStmt>()) {
            int m = p.stmt_info[i].model;
            const EntitySpec* entity = m >= 0 ? p.models[m].spec : nullptr;
            if (!entity) continue;
            const MethodSpec* method = entity->find_method(call->method);
            if (!method) continue;  // resolve already reported E-NAME-004
            bool single_table = method->params.size() == 1 &&
                                method->params[0] == PrimKind::Table;
            if (!single_table) {
                std::string sig = "(";
                for (std::size_t k = 0; k < method->params.size(); ++k) {
                    if (k) sig += ", ";
                    sig += std::string(prim_kind_name(method->params[k]));
                }
                sig += ")";
                out.push_back(make_diagnostic(
                    "E-TYPE-004", Severity::Error, call->method_span,
                    "method " + call->method + " of " + entity->name +
                        " expects " + sig +
                        "; call statements pass exactly one table"));
            }
        }
    }
    return out;
}

// --- dependency checking (W-DEP-001) ----------------------------------------

// Warns when an explicitly supplied argument is irrelevant because its
// controlling parameter's effective value fails the declared condition.
// Defaults never trigger the warning.
inline std::vector<Diagnostic> check_dependencies(const ResolvedProgram& p,
                                                  const ApiSpec& spec) {
    (void)spec;
    std::vector<Diagnostic> out;
    auto histories = detail::collect_model_histories(p);

    auto warn = [&](const ParameterSpec& param, SourceSpan span) {
        const Condition& cond = *param.relevant_when;
        out.push_back(make_diagnostic(
            "W-DEP-001", Severity::Warning, span,
            param.name + " is only relevant when " + cond.param + " " +
                cond.op_text() + " " + cond.value.to_string()));
    };

    for (std::size_t m = 0; m < p.models.size(); ++m) {
        const ModelInstance& model = p.models[m];
        if (!model.spec) continue;
        const detail::ModelHistory& history = histories[m];

        auto controlling_ok = [&](const Condition& cond) {
            auto value = detail::effective_value(model, history, cond.param);
            if (!value) return true;  // nothing to judge against
            return cond.holds(*value);
        };

        for (const auto& arg : model.ctor_args) {
            const ParameterSpec* param = model.spec->find_param(arg.name);
            if (!param || !param->relevant_when) continue;
            if (!controlling_ok(*param->relevant_when))
                warn(*param, arg.name_span);
        }
        for (const auto& set : history.sets) {
            const ParameterSpec* param = model.spec->find_param(set.param);
            if (!param || !param->relevant_when) continue;
            if (!controlling_ok(*param->relevant_when))
                warn(*param, set.span);
        }
    }

    for (const auto& transform : p.transforms) {
        if (!transform.spec) continue;
        for (const auto& arg : transform.args) {
            const ParameterSpec* param = transform.spec->find_param(arg.name);
            if (!param || !param->relevant_when) continue;
            const Condition& cond = *param->relevant_when;
            std::optional<Literal> value;
            if (const ResolvedArg* c = transform.find_arg(cond.param))
                value = c->value;
            else if (const ParameterSpec* cp =
                         transform.spec->find_param(cond.param);
                     cp && cp->default_value)
                value = *cp->default_value;
            if (value && !cond.holds(*value)) warn(*param, arg.name_span);
        }
    }
    return out;
}

// --- temporal / typestate checking (E-TEMP-*) --------------------------------

// Simulates each model's typestate in statement order. MustPrecede demands
// the prerequisite was called earlier; RequireSetBefore demands the guarded
// parameter held the required value when the prerequisite first fired (or,
// without a fired prerequisite, at the call itself). Both report at the
// offending call.
inline std::vector<Diagnostic> check_temporal(const ResolvedProgram& p,
                                              const ApiSpec& spec) {
    (void)spec;
    std::vector<Diagnostic> out;
    auto histories = detail::collect_model_histories(p);

    for (std::size_t m = 0; m < p.models.size(); ++m) {
        const ModelInstance& model = p.models[m];
        if (!model.spec) continue;
        const detail::ModelHistory& history = histories[m];

        for (const auto& call : history.calls) {
            for (const auto& rule : model.spec->temporal) {
                if (rule.variant == TemporalRule::Variant::MustPrecede) {
                    if (rule.second != call.method) continue;
                    bool satisfied = false;
                    for (const auto& earlier : history.calls)
                        if (earlier.stmt < call.stmt &&
                            earlier.method == rule.first)
                            satisfied = true;
                    if (!satisfied)
                        out.push_back(make_diagnostic(
                            "E-TEMP-001", Severity::Error, call.span,
                            rule.first + " must be called before " +
                                rule.second));
                } else {
                    if (rule.method != call.method) continue;
                    // Anchor at the first fired prerequisite of this method.
                    int anchor_stmt = -1;
                    std::string anchor_method;
                    for (const auto& prereq : model.spec->temporal) {
                        if (prereq.variant !=
                                TemporalRule::Variant::MustPrecede ||
                            prereq.second != call.method)
                            continue;
                        for (const auto& earlier : history.calls) {
                            if (earlier.stmt < call.stmt &&
                                earlier.method == prereq.first &&
                                (anchor_stmt < 0 ||
                                 earlier.stmt < anchor_stmt)) {
                                anchor_stmt = earlier.stmt;
                                anchor_method = earlier.method;
                            }
                        }
                    }
                    std::optional<Literal> value;
                    std::string message;
                    if (anchor_stmt >= 0) {
                        value = detail::value_before(model, history,
                                                     rule.param, anchor_stmt);
                        message = rule.param + " must be set to " +
                                  rule.required_value.to_string() +
                                  " prior to the first call of " +
                                  anchor_method;
                    } else {
                        value = detail::value_before(model, history,
                                                     rule.param, call.stmt);
                        message = rule.param + " must be set to " +
                                  rule.required_value.to_string() +
                                  " before calling " + call.method;
                    }
                    bool ok = value && value->equals(rule.required_value);
                    if (!ok)
                        out.push_back(make_diagnostic("E-TEMP-002",
                                                      Severity::Error,
                                                      call.span, message));
                }
            }
        }
    }
    return out;
}

// --- execution context checking (W-CTX-001) ---------------------------------

// Flags explicitly supplied arguments whose parameter carries a context
// warning for one of the active context tags. Values equal to the declared
// default are benign and stay silent.
inline std::vector<Diagnostic> check_context(
    const ResolvedProgram& p, const ApiSpec& spec,
    const std::set<std::string>& contexts) {
    (void)spec;
    std::vector<Diagnostic> out;
    if (contexts.empty()) return out;
    auto histories = detail::collect_model_histories(p);

    auto check_supply = [&](const EntitySpec* entity, const std::string& name,
                            const Literal& value, SourceSpan span) {
        if (!entity) return;
        const ParameterSpec* param = entity->find_param(name);
        if (!param || !param->context_warning) return;
        if (!contexts.count(param->context_warning->tag)) return;
        if (param->default_value && value.equals(*param->default_value))
            return;
        out.push_back(make_diagnostic("W-CTX-001", Severity::Warning, span,
                                      param->context_warning->message));
    };

    for (std::size_t m = 0; m < p.models.size(); ++m) {
        const ModelInstance& model = p.models[m];
        for (const auto& arg : model.ctor_args)
            check_supply(model.spec, arg.name, arg.value, arg.name_span);
        for (const auto& set : histories[m].sets)
            check_supply(model.spec, set.param, set.value, set.span);
    }
    for (const auto& transform : p.transforms)
        for (const auto& arg : transform.args)
            check_supply(transform.spec, arg.name, arg.value, arg.name_span);
    return out;
}

// --- ML best practices (W-ML-*, E-ML-*) --------------------------------------

namespace detail {

inline bool is_imputer(const TransformInstance& t) {
    return t.entity.find("impute") != std::string::npos;
}
inline bool is_encoder(const TransformInstance& t) {
    return t.entity.find("encode") != std::string::npos;
}
inline bool is_scaler(const TransformInstance& t) {
    return t.entity.find("scale") != std::string::npos ||
           t.entity.find("normal") != std::string::npos;
}

inline const DataProfile* find_profile(const std::vector<DataProfile>& profiles,
                                       const std::string& path) {
    auto basename = [](std::string_view p) {
        auto pos = p.find_last_of("/\\");
        return pos == std::string_view::npos ? p : p.substr(pos + 1);
    };
    for (const auto& profile : profiles)
        if (profile.source == path) return &profile;
    for (const auto& profile : profiles)
        if (basename(profile.source) == basename(path)) return &profile;
    return nullptr;
}

}  // namespace detail

inline std::vector<Diagnostic> check_best_practices(
    const ResolvedProgram& p, const ApiSpec& spec,
    const std::vector<DataProfile>& profiles, bool strict = false) {
    (void)spec;
    std::vector<Diagnostic> out;
    const auto& stmts = p.ast->statements;

    // Single walk for the facts every rule needs.
    bool classification_context = false;
    for (const auto& model : p.models)
        if (model.spec && model.spec->task == Task::Classification)
            classification_context = true;
    int last_evaluate = -1;
    for (std::size_t i = 0; i < stmts.size(); ++i) {
        if (stmts[i].as<EvaluateStmt>()) last_evaluate = static_cast<int>(i);
        if (p.stmt_info[i].metric &&
            p.stmt_info[i].metric->task == Task::Classification)
            classification_context = true;
    }
    bool has_split = false;
    std::vector<int> split_origins;  // origin loads whose data gets split
    for (std::size_t i = 0; i < stmts.size(); ++i) {
        if (!stmts[i].as<SplitStmt>()) continue;
        has_split = true;
        if (p.stmt_info[i].dataset)
            split_origins.push_back(p.stmt_info[i].dataset->origin_load);
    }
    std::vector<std::set<Role>> applied_roles(p.transforms.size());
    for (std::size_t i = 0; i < stmts.size(); ++i) {
        if (!stmts[i].as<ApplyStmt>()) continue;
        int t = p.stmt_info[i].transform;
        if (t >= 0 && p.stmt_info[i].dataset)
            applied_roles[t].insert(p.stmt_info[i].dataset->role);
    }

    // W-ML-001: split ratios must sum to 1 (tolerance 1e-9).
    for (std::size_t i = 0; i < stmts.size(); ++i) {
        const auto* split = stmts[i].as<SplitStmt>();
        if (!split) continue;
        double sum = split->ratios[0] + split->ratios[1] + split->ratios[2];
        if (std::abs(sum - 1.0) > 1e-9)
            out.push_back(make_diagnostic(
                "W-ML-001", Severity::Warning, split->ratios_span,
                "split ratios sum to " + format_number(sum) +
                    " (expected 1)"));
        // W-ML-002: classification pipelines should stratify their split.
        if (!split->stratify_by && classification_context)
            out.push_back(make_diagnostic(
                "W-ML-002", Severity::Warning, stmts[i].span,
                "split is not stratified; stratified sampling keeps the "
                "label distribution similar across train, val and test"));
    }

    // E-ML-003: the test split is consumed only by the final evaluate.
    auto test_consumed = [&](std::size_t i, const SourceSpan& span,
                             const std::string& var) {
        const auto& info = p.stmt_info[i];
        if (!info.dataset || info.dataset->role != Role::Test) return;
        if (stmts[i].as<EvaluateStmt>() &&
            static_cast<int>(i) == last_evaluate)
            return;
        out.push_back(make_diagnostic(
            "E-ML-003", Severity::Error, span,
            "the test set must stay hidden until the final evaluation; '" +
                var + "' is consumed here"));
    };
    for (std::size_t i = 0; i < stmts.size(); ++i) {
        if (const auto* fit = stmts[i].as<FitStmt>())
            test_consumed(i, fit->dataset_span, fit->dataset);
        else if (const auto* call = stmts[i].as<CallStmt>())
            test_consumed(i, call->dataset_span, call->dataset);
        else if (const auto* ev = stmts[i].as<EvaluateStmt>())
            test_consumed(i, ev->dataset_span, ev->dataset);
        else if (const auto* split = stmts[i].as<SplitStmt>())
            test_consumed(i, split->source_span, split->source);
        else if (const auto* td = stmts[i].as<TransformDeclStmt>())
            test_consumed(i, td->fit_on_span, td->fit_on);
    }

    // W-ML-004: a transform applied to train must reach val and test too.
    for (std::size_t t = 0; t < p.transforms.size(); ++t) {
        if (!has_split || !applied_roles[t].count(Role::Train)) continue;
        std::vector<std::string> missing;
        if (!applied_roles[t].count(Role::Val)) missing.push_back("val");
        if (!applied_roles[t].count(Role::Test)) missing.push_back("test");
        if (missing.empty()) continue;
        const TransformInstance& transform = p.transforms[t];
        out.push_back(make_diagnostic(
            "W-ML-004", Severity::Warning,
            stmts[transform.decl_stmt].span,
            "transform '" + transform.var + "' is applied to train but not "
            "to " + join_strings(missing) +
                "; apply every training-data step to the other splits"));
    }

    // E-ML-005: fitting a transform on val/test or on pre-split data leaks
    // information into training-time decisions.
    for (const auto& transform : p.transforms) {
        if (!transform.fit_on) continue;
        Role role = transform.fit_on->role;
        if (role == Role::Val || role == Role::Test) {
            out.push_back(make_diagnostic(
                "E-ML-005", Severity::Error, transform.fit_on_span,
                "transform '" + transform.var + "' is fitted on the " +
                    std::string(role_name(role)) + " split (data leakage)"));
        } else if (role == Role::Raw) {
            bool feeds_split = false;
            for (int origin : split_origins)
                if (origin >= 0 && origin == transform.fit_on->origin_load)
                    feeds_split = true;
            if (feeds_split)
                out.push_back(make_diagnostic(
                    "E-ML-005", Severity::Error, transform.fit_on_span,
                    "transform '" + transform.var + "' is fitted on "
                    "pre-split data (data leakage)"));
        }
    }

    // E-ML-006: metric and learning algorithm must address the same task.
    for (std::size_t i = 0; i < stmts.size(); ++i) {
        const auto* ev = stmts[i].as<EvaluateStmt>();
        if (!ev) continue;
        const MetricSpec* metric = p.stmt_info[i].metric;
        int m = p.stmt_info[i].model;
        const EntitySpec* entity = m >= 0 ? p.models[m].spec : nullptr;
        if (!metric || !entity) continue;
        if (entity->task != Task::Classification &&
            entity->task != Task::Regression)
            continue;
        if (metric->task != entity->task)
            out.push_back(make_diagnostic(
                "E-ML-006", Severity::Error, ev->metric_span,
                "metric '" + metric->name + "' (" +
                    std::string(task_name(metric->task)) +
                    ") is incompatible with entity '" + entity->name + "' (" +
                    std::string(task_name(entity->task)) + ")"));
    }

    // W-ML-007: a requirement without a matching evaluation is untestable.
    for (std::size_t i = 0; i < stmts.size(); ++i) {
        const auto* req = stmts[i].as<RequireStmt>();
        if (!req) continue;
        bool evaluated = false;
        for (std::size_t j = 0; j < stmts.size(); ++j)
            if (const auto* ev = stmts[j].as<EvaluateStmt>())
                if (ev->metric == req->metric) evaluated = true;
        if (!evaluated)
            out.push_back(make_diagnostic(
                "W-ML-007", Severity::Warning, req->metric_span,
                "require references metric '" + req->metric +
                    "' but the pipeline never evaluates it"));
    }

    // Profile-dependent rules run only when profiles were supplied.
    if (profiles.empty()) {
        if (strict)
            out.push_back(make_diagnostic(
                "W-ML-000", Severity::Info, p.ast->name_span,
                "profile-dependent rules skipped: W-ML-008, W-ML-009, "
                "W-ML-010 (no profiles supplied)"));
        return out;
    }

    for (std::size_t i = 0; i < stmts.size(); ++i) {
        const auto* fit = stmts[i].as<FitStmt>();
        if (!fit || !p.stmt_info[i].dataset) continue;
        const DatasetState& ds = *p.stmt_info[i].dataset;
        const DataProfile* profile =
            detail::find_profile(profiles, ds.origin_path);
        if (!profile) continue;

        bool imputed = false, encoded = false, scaled = false;
        for (int t : ds.provenance) {
            const TransformInstance& transform = p.transforms[t];
            imputed = imputed || detail::is_imputer(transform);
            encoded = encoded || detail::is_encoder(transform);
            scaled = scaled || detail::is_scaler(transform);
        }

        // W-ML-008: missing values reach fit with no imputation step.
        if (!imputed) {
            std::vector<std::string> with_missing;
            for (const auto& col : profile->columns)
                if (col.missing_count > 0)
                    with_missing.push_back("'" + col.name + "'");
            if (!with_missing.empty())
                out.push_back(make_diagnostic(
                    "W-ML-008", Severity::Warning, stmts[i].span,
                    "column(s) " + join_strings(with_missing) + " of " +
                        quote_text(profile->source) +
                        " contain missing values and no imputation "
                        "transform is applied before fit"));
        }

        // W-ML-009: unnormalized numeric features reach fit.
        if (!scaled) {
            std::vector<std::string> unnormalized;
            for (const auto& col : profile->columns) {
                if (col.name == fit->label) continue;
                if (col.inferred_kind == ColumnKind::Numeric &&
                    col.normalization == Normalization::None)
                    unnormalized.push_back("'" + col.name + "'");
            }
            if (!unnormalized.empty())
                out.push_back(make_diagnostic(
                    "W-ML-009", Severity::Warning, stmts[i].span,
                    "numeric column(s) " + join_strings(unnormalized) +
                        " of " + quote_text(profile->source) +
                        " are not normalized"));
        }

        // W-ML-010: categorical features reach fit without an encoding.
        if (!encoded) {
            for (const auto& col : profile->columns) {
                if (col.name == fit->label) continue;
                if (col.inferred_kind != ColumnKind::Categorical) continue;
                bool ordered = col.ordered.value_or(false);
                out.push_back(make_diagnostic(
                    "W-ML-010", Severity::Warning, stmts[i].span,
                    "categorical column '" + col.name + "' of " +
                        quote_text(profile->source) +
                        " is fed to fit without an encoding; consider " +
                        (ordered ? "label encoding (the column is ordered)"
                                 : "one-hot encoding")));
            }
        }
    }
    return out;
}

// --- full program check -------------------------------------------------

// Runs resolution and the enabled passes, merges in syntax diagnostics,
// deduplicates and sorts. Every failure is a diagnostic; nothing throws.
inline CheckReport check_program(
    const Pipeline& ast, const ApiSpec& spec,
    const CheckOptions& options = {},
    const std::vector<Diagnostic>& syntax_diagnostics = {}) {
    std::vector<Diagnostic> all = syntax_diagnostics;
    ResolveResult resolved = resolve(ast, spec);
    all.insert(all.end(), resolved.diagnostics.begin(),
               resolved.diagnostics.end());

    const ResolvedProgram& p = resolved.program;
    auto run = [&](unsigned bit, std::vector<Diagnostic> (*pass)(
                                     const ResolvedProgram&, const ApiSpec&)) {
        if (options.passes & bit) {
            auto diags = pass(p, spec);
            all.insert(all.end(), diags.begin(), diags.end());
        }
    };
    run(kPassTypes, check_types);
    run(kPassDependencies, check_dependencies);
    run(kPassTemporal, check_temporal);
    if (options.passes & kPassContext) {
        auto diags = check_context(p, spec, options.contexts);
        all.insert(all.end(), diags.begin(), diags.end());
    }
    if (options.passes & kPassBestPractices) {
        auto diags =
            check_best_practices(p, spec, options.profiles, options.strict);
        all.insert(all.end(), diags.begin(), diags.end());
    }
    return finalize_report(std::move(all));
}

}  // namespace mlguard
