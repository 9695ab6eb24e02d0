#include "fdde/manifest.hpp"

#include "fdde/errors.hpp"

namespace fdde {

std::string_view to_string(Outcome outcome) noexcept {
    switch (outcome) {
    case Outcome::Converges: return "converges";
    case Outcome::Diverges: return "diverges";
    case Outcome::Chaotic: return "chaotic";
    }
    return "?";
}

const std::vector<ManifestEntry>& manifest() {
    using O = Outcome;
    static const std::vector<ManifestEntry> entries = {
        {"ex1-stable", "Example 1, stable orders", 0.1, default_horizon,
         {{"ex1-linear", 0.0, 0.8, 0.15, O::Converges, {}}, {"ex1", 0.0, 0.7, 0.12, O::Converges, {}}}},
        {"ex1-unstable", "Example 1, unstable orders", 0.1, default_horizon,
         {{"ex1-linear", 0.0, 0.4, 0.3, O::Diverges, {}}, {"ex1", 0.0, 0.4, 0.12, O::Diverges, {}}}},
        {"ex2-case1", "Example 2, tau = 0.38 below tau*", 0.1, default_horizon,
         {{"ex2", 0.0, 0.45, 0.38, O::Converges, {}}, {"ex2", 0.0, 0.3, 0.38, O::Diverges, {}}}},
        {"ex2-case2", "Example 2, tau = 0.45 between tau* and tau**", 0.1, default_horizon,
         {{"ex2", 0.0, 0.7, 0.45, O::Converges, {}},
          {"ex2", 0.0, 0.41, 0.45, O::Diverges, {}},
          {"ex2", 0.0, 0.95, 0.45, O::Diverges, {}}}},
        {"ex2-case3", "Example 2, tau = 0.54 above tau**", 0.1, default_horizon,
         {{"ex2", 0.0, 0.7, 0.54, O::Diverges, {}}}},
        {"ex2-positive-a", "Example 2 with a > 0: f = 9x - 9.03xd", 0.1, default_horizon,
         {{"ex2-positive-a", 0.0, 0.94, 0.1, O::Converges, {}},
          {"ex2-positive-a", 0.0, 0.8, 0.1, O::Diverges, {}},
          {"ex2-positive-a", 0.0, 0.8, 0.111, O::Diverges, {}},
          {"ex2-positive-a", 0.0, 1.0, 0.111, O::Diverges, {}},
          {"ex2-positive-a", 0.0, 0.9, 0.12, O::Diverges, {}}}},
        {"ex3-stable", "Example 3, alpha below alpha0", 0.1, default_horizon,
         {{"ex3", 0.0, 0.4, 2.5, O::Converges, {}}}},
        {"ex3-unstable", "Example 3, alpha above alpha0", 0.1, default_horizon,
         {{"ex3", 0.0, 0.91, 2.5, O::Diverges, {}}}},
        {"sec5-alpha1", "x - x^2 + 5xd - xd^3 at integer order", 0.1, default_horizon,
         {{"sec5", 2.0, 1.0, 0.31, O::Converges, {}}}},
        {"sec5-chaos", "x - x^2 + 5xd - xd^3 at alpha = 0.27", 0.1, default_horizon,
         {{"sec5", 2.0, 0.27, 0.31, O::Chaotic, 9.885276}}},
    };
    return entries;
}

const ManifestEntry& manifest_entry(std::string_view id) {
    for (const auto& entry : manifest()) {
        if (entry.id == id) return entry;
    }
    std::string known;
    for (const auto& entry : manifest()) known += (known.empty() ? "" : ", ") + entry.id;
    throw ConfigError("unknown example id '" + std::string(id) + "'; known ids: " + known);
}

FddeProblem problem_for(const ManifestEntry& entry, const ManifestRun& run) {
    return FddeProblem{Rhs2::builtin(run.rhs), FractionalOrder(run.alpha), Delay(run.tau),
                       run.x_star + entry.history_offset, entry.horizon, 0.0};
}

RunResult run_manifest(const ManifestEntry& entry, const ManifestRun& run) {
    const FddeProblem problem = problem_for(entry, run);
    RunResult result{run, simulate(problem), {}, {}, {}, Outcome::Converges, false};
    result.trend = amplitude_trend(result.trajectory, run.x_star);

    if (result.trend.growing()) {
        result.observed = Outcome::Diverges;
    } else if (result.trend.bounded_nonconverging()) {
        const auto cfg = EmbeddingConfig::defaults_for(run.tau, result.trajectory.step, run.expected_slope);
        result.embedding = cfg;
        try {
            result.lyapunov = mle(result.trajectory, cfg);
        } catch (const LengthError&) {
        } catch (const DegenerateError&) {
        }
        result.observed = result.lyapunov && result.lyapunov->mle > 0.0 ? Outcome::Chaotic : Outcome::Converges;
    } else {
        result.observed = Outcome::Converges;
    }
    result.matched = result.observed == run.expected;
    return result;
}

} // namespace fdde
