#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "mlguard/source.hpp"
#include "mlguard/diagnostics.hpp"

namespace mlguard {

// Damerau-Levenshtein distance (optimal string alignment): insertions,
// deletions and substitutions cost 1, as does transposing adjacent
// characters.
inline std::size_t damerau_levenshtein(std::string_view a,
                                       std::string_view b) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    std::vector<std::vector<std::size_t>> d(n + 1,
                                            std::vector<std::size_t>(m + 1));
    for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
            d[i][j] = std::min({d[i - 1][j] + 1,         // deletion
                                d[i][j - 1] + 1,         // insertion
                                d[i - 1][j - 1] + cost}); // substitution
            if (i > 1 && j > 1 && a[i - 1] == b[j - 2] &&
                a[i - 2] == b[j - 1])
                d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
        }
    }
    return d[n][m];
}

inline constexpr std::size_t kSuggestionDistanceLimit = 2;

// Candidates within edit distance 2 of the offending spelling, closest
// first; ties keep candidate order. Empty when nothing is close enough.
inline std::vector<std::string> suggest_fix(
    std::string_view offending, const std::vector<std::string>& candidates) {
    std::vector<std::pair<std::size_t, std::size_t>> scored;  // (dist, index)
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        std::size_t dist = damerau_levenshtein(offending, candidates[i]);
        if (dist <= kSuggestionDistanceLimit) scored.emplace_back(dist, i);
    }
    std::sort(scored.begin(), scored.end());
    std::vector<std::string> out;
    out.reserve(scored.size());
    for (const auto& [dist, index] : scored) out.push_back(candidates[index]);
    return out;
}

// Attaches a rename quickfix for the nearest candidates to a diagnostic.
// `quoted` controls whether the replacement is a text literal or a bare
// identifier, so applying it re-lexes cleanly.
inline void attach_suggestions(Diagnostic& diag, SourceSpan span,
                               std::string_view offending,
                               const std::vector<std::string>& candidates,
                               bool quoted) {
    for (const auto& candidate : suggest_fix(offending, candidates)) {
        Quickfix fix;
        fix.span = span;
        fix.replacement = quoted ? quote_text(candidate) : candidate;
        fix.description = "replace " +
                          (quoted ? quote_text(offending)
                                  : "'" + std::string(offending) + "'") +
                          " with " +
                          (quoted ? quote_text(candidate)
                                  : "'" + candidate + "'");
        diag.suggestions.push_back(std::move(fix));
    }
}

}  // namespace mlguard
