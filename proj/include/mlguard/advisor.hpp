#pragma once

#include <string>
#include <vector>

#include "mlguard/api_spec.hpp"
#include "mlguard/profile.hpp"
#include "mlguard/schema.hpp"

namespace mlguard {

struct Suggestion {
    std::string category;  // metric, model, encoding, missing, validation, split
    std::string message;
};

// Data-driven guidance that needs no task: encodings for categorical
// columns, high-missing columns, validation strategy and split convention.
inline std::vector<Suggestion> advise_dataset(const DataProfile& profile,
                                              const SchemaMeta* schema) {
    std::vector<Suggestion> out;
    for (const auto& col : profile.columns) {
        if (col.inferred_kind != ColumnKind::Categorical) continue;
        const ColumnSchema* cs = schema ? schema->find(col.name) : nullptr;
        bool ordered = cs ? cs->ordered : col.ordered.value_or(false);
        if (ordered)
            out.push_back({"encoding",
                           "column '" + col.name +
                               "' is ordered categorical; replace its values "
                               "by an increasing sequence of numbers (label "
                               "encoding)"});
        else
            out.push_back({"encoding",
                           "column '" + col.name +
                               "' is categorical; map its values to "
                               "indicator vectors (one-hot encoding)"});
    }
    for (const auto& col : profile.columns) {
        if (profile.row_count > 0 &&
            col.missing_count * 2 > profile.row_count)
            out.push_back({"missing",
                           "column '" + col.name +
                               "' is missing in more than half of the rows; "
                               "consider dropping it"});
    }
    if (profile.row_count < 1000)
        out.push_back({"validation",
                       "with " + std::to_string(profile.row_count) +
                           " rows, prefer cross-validation over a single "
                           "held-out validation set"});
    else
        out.push_back({"validation",
                       "with " + std::to_string(profile.row_count) +
                           " rows, a held-out validation set is adequate"});
    out.push_back({"split",
                   "a 70/15/15 train/validation/test split is a common "
                   "starting point (a convention, not a rule)"});
    return out;
}

// Task-aware guidance from a fixed rule table: metrics and model entities
// filtered by task, plus everything advise_dataset reports.
inline std::vector<Suggestion> advise(Task task, const DataProfile& profile,
                                      const SchemaMeta* schema,
                                      const ApiSpec& spec) {
    std::vector<Suggestion> out;
    for (const auto& [name, metric] : spec.metrics) {
        if (metric.task == task)
            out.push_back({"metric",
                           "metric '" + name + "' suits a " +
                               std::string(task_name(task)) + " task"});
    }
    for (const auto& [name, entity] : spec.entities) {
        if (entity.kind != EntityKind::Model) continue;
        if (entity.task == task || entity.task == Task::Both)
            out.push_back({"model",
                           "entity '" + name + "' supports " +
                               std::string(task_name(task))});
    }
    auto data = advise_dataset(profile, schema);
    out.insert(out.end(), data.begin(), data.end());
    return out;
}

}  // namespace mlguard
