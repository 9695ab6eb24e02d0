#pragma once

// Reproduction manifest for the worked examples. Each entry bundles one or
// more simulations with the qualitative outcome each should show.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fdde/chaos.hpp"
#include "fdde/solver.hpp"

namespace fdde {

enum class Outcome {
    Converges,  // amplitude about x* shrinks, no blow-up
    Diverges,   // blow-up, or amplitude about x* grows
    Chaotic,    // bounded, amplitude does not die out, positive MLE
};

std::string_view to_string(Outcome outcome) noexcept;

struct ManifestRun {
    std::string rhs;     // builtin id
    double x_star = 0.0;
    double alpha = 1.0;
    double tau = 0.0;
    Outcome expected = Outcome::Converges;
    std::optional<double> expected_slope;  // sets the MLE fit range for Chaotic runs
};

struct ManifestEntry {
    std::string id;
    std::string title;
    double history_offset = 0.1;  // history = x* + offset
    double horizon = default_horizon;
    std::vector<ManifestRun> runs;
};

const std::vector<ManifestEntry>& manifest();

/// Throws ConfigError listing the known ids.
const ManifestEntry& manifest_entry(std::string_view id);

FddeProblem problem_for(const ManifestEntry& entry, const ManifestRun& run);

struct RunResult {
    ManifestRun run;
    Trajectory trajectory;
    AmplitudeTrend trend;
    std::optional<LyapunovEstimate> lyapunov;  // Chaotic runs only
    std::optional<EmbeddingConfig> embedding;
    Outcome observed = Outcome::Converges;
    bool matched = false;
};

/// Observed outcome: Diverges when the amplitude trend grows; Chaotic when the
/// trend is bounded_nonconverging and the MLE is positive; Converges otherwise.
/// The MLE is only estimated in the bounded_nonconverging case.
RunResult run_manifest(const ManifestEntry& entry, const ManifestRun& run);

} // namespace fdde
