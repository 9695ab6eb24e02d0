#pragma once

// Text, CSV and JSON renderings of the analysis results. The formats are
// described in docs/output_formats.md.

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fdde/chaos.hpp"
#include "fdde/dynamics.hpp"
#include "fdde/solver.hpp"
#include "fdde/stability_map.hpp"

namespace fdde {

inline constexpr int csv_format_version = 1;
inline constexpr int json_format_version = 1;

/// 17 significant digits, the CSV number format.
std::string format_exact(double v);

/// 6 significant digits, for human-readable text.
std::string format_short(double v);

/// "DS1, a0=-4.31582", "DS2, a0=-12.8353, a1=-10", "S", ...
std::string describe(const RegionLabel& label);

/// "threshold alpha0=0.384137, stable above", "window (0.454118, 0.919559)",
/// "all stable", "all unstable".
std::string describe(const CriticalAlphaResult& result);

void write_pairs_csv(std::ostream& out, std::string_view first, std::string_view second,
                     std::span<const std::pair<double, double>> rows);

/// Columns t,x; one row per sample, including a recorded blow-up sample.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

nlohmann::json to_json(const RegionLabel& label);
nlohmann::json to_json(const CriticalAlphaResult& result);
nlohmann::json to_json(const TauExtrema& extrema);
nlohmann::json to_json(const Equilibrium& eq);
nlohmann::json to_json(const EquilibriumReport& report);
nlohmann::json to_json(const EmbeddingConfig& cfg);
/// The divergence curve is omitted unless `with_curve`.
nlohmann::json to_json(const LyapunovEstimate& est, bool with_curve = true);
nlohmann::json to_json(const AmplitudeTrend& trend);
/// Grid and blow-up data; sample values only if `with_values`.
nlohmann::json to_json(const Trajectory& traj, bool with_values = true);

} // namespace fdde
