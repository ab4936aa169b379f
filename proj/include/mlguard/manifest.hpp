#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mlguard/ast.hpp"
#include "mlguard/backend.hpp"
#include "mlguard/sha256.hpp"
#include "mlguard/source.hpp"

namespace mlguard {

// Reproducibility record written beside generated code: content hashes of
// every input, the split seed and the stated quality requirements.
// Identical inputs plus a fixed timestamp give identical bytes.
struct RunManifest {
    std::string pipeline;
    std::string source_sha256;
    std::vector<std::pair<std::string, std::string>> specs;  // name, version
    std::string backend_name;
    std::string backend_version;
    std::vector<std::string> profile_hashes;
    std::optional<long long> seed;
    struct Requirement {
        std::string metric;
        std::string op;
        double threshold;
    };
    std::vector<Requirement> requirements;
    std::string created;  // RFC 3339 UTC, injectable for reproducible builds
};

struct ManifestInputs {
    std::string source_bytes;
    std::vector<std::pair<std::string, std::string>> specs;
    std::vector<std::string> profile_bytes;
    std::string timestamp;
};

inline RunManifest emit_run_manifest(const Pipeline& ast,
                                     const BackendTemplate& backend,
                                     const ManifestInputs& inputs) {
    RunManifest manifest;
    manifest.pipeline = ast.name;
    manifest.source_sha256 = sha256_hex(inputs.source_bytes);
    manifest.specs = inputs.specs;
    manifest.backend_name = backend.name;
    manifest.backend_version = backend.version;
    for (const auto& bytes : inputs.profile_bytes)
        manifest.profile_hashes.push_back(sha256_hex(bytes));
    for (const auto& stmt : ast.statements) {
        if (const auto* split = stmt.as<SplitStmt>()) {
            if (!manifest.seed && split->seed) manifest.seed = *split->seed;
        } else if (const auto* req = stmt.as<RequireStmt>()) {
            manifest.requirements.push_back(
                {req->metric, std::string(require_op_text(req->op)),
                 req->threshold});
        }
    }
    manifest.created = inputs.timestamp;
    return manifest;
}

// Stable key order, one `key = value` per line; optional keys are omitted.
inline std::string render_manifest(const RunManifest& manifest) {
    std::string out;
    out += "pipeline = " + manifest.pipeline + "\n";
    out += "source_sha256 = " + manifest.source_sha256 + "\n";
    for (const auto& [name, version] : manifest.specs)
        out += "spec = " + name + (version.empty() ? "" : " " + version) +
               "\n";
    out += "backend = " + manifest.backend_name + " " +
           manifest.backend_version + "\n";
    for (const auto& hash : manifest.profile_hashes)
        out += "profile_sha256 = " + hash + "\n";
    if (manifest.seed) out += "seed = " + std::to_string(*manifest.seed) + "\n";
    for (const auto& req : manifest.requirements)
        out += "requirement = " + req.metric + " " + req.op + " " +
               format_float(req.threshold) + "\n";
    out += "created = " + manifest.created + "\n";
    return out;
}

}  // namespace mlguard
