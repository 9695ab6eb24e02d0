#include "fdde/report.hpp"

#include <charconv>
#include <ostream>
#include <type_traits>

namespace fdde {

namespace {

std::string with_precision(double v, int digits) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

nlohmann::json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

} // namespace

std::string format_exact(double v) { return with_precision(v, 17); }

std::string format_short(double v) { return with_precision(v, 6); }

std::string describe(const RegionLabel& label) {
    std::string out(to_string(label.tag));
    if (label.a0) out += ", a0=" + format_short(*label.a0);
    if (label.a1) out += ", a1=" + format_short(*label.a1);
    return out;
}

std::string describe(const CriticalAlphaResult& result) {
    return std::visit(
        [](const auto& r) -> std::string {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, critical::AllStable>) {
                return "all stable";
            } else if constexpr (std::is_same_v<T, critical::AllUnstable>) {
                return "all unstable";
            } else if constexpr (std::is_same_v<T, critical::Threshold>) {
                return "threshold alpha0=" + format_short(r.alpha0) + ", stable " +
                       std::string(to_string(r.stable_side));
            } else {
                return "window (" + format_short(r.alpha1) + ", " + format_short(r.alpha2) + ")";
            }
        },
        result);
}

void write_pairs_csv(std::ostream& out, std::string_view first, std::string_view second,
                     std::span<const std::pair<double, double>> rows) {
    out << first << ',' << second << '\n';
    for (const auto& [u, v] : rows) out << format_exact(u) << ',' << format_exact(v) << '\n';
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,x\n";
    for (std::size_t i = 0; i < traj.values.size(); ++i) {
        out << format_exact(traj.time(i)) << ',' << format_exact(traj.values[i]) << '\n';
    }
}

nlohmann::json to_json(const RegionLabel& label) {
    return {{"tag", to_string(label.tag)}, {"a0", optional_number(label.a0)}, {"a1", optional_number(label.a1)}};
}

nlohmann::json to_json(const CriticalAlphaResult& result) {
    return std::visit(
        [](const auto& r) -> nlohmann::json {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, critical::AllStable>) {
                return {{"kind", "all_stable"}};
            } else if constexpr (std::is_same_v<T, critical::AllUnstable>) {
                return {{"kind", "all_unstable"}};
            } else if constexpr (std::is_same_v<T, critical::Threshold>) {
                return {{"kind", "threshold"}, {"alpha0", r.alpha0}, {"stable_side", to_string(r.stable_side)}};
            } else {
                return {{"kind", "window"}, {"alpha1", r.alpha1}, {"alpha2", r.alpha2}};
            }
        },
        result);
}

nlohmann::json to_json(const TauExtrema& extrema) {
    nlohmann::json peak = nullptr;
    if (extrema.peak) peak = {{"alpha_star_star", extrema.peak->alpha}, {"tau_star_star", extrema.peak->tau}};
    return {{"tau_star", extrema.tau_star}, {"peak", peak}};
}

nlohmann::json to_json(const Equilibrium& eq) { return {{"x_star", eq.x_star}, {"a", eq.a}, {"b", eq.b}}; }

nlohmann::json to_json(const EquilibriumReport& report) {
    return {{"equilibrium", to_json(report.equilibrium)},
            {"region", to_json(report.region)},
            {"verdict", to_string(report.verdict)},
            {"critical", report.critical ? to_json(*report.critical) : nlohmann::json(nullptr)}};
}

nlohmann::json to_json(const EmbeddingConfig& cfg) {
    return {{"dimension", cfg.dimension},
            {"lag", cfg.lag},
            {"theiler", cfg.theiler},
            {"fit_range", {cfg.fit_min, cfg.fit_max}},
            {"transient_skip", cfg.transient_skip}};
}

nlohmann::json to_json(const LyapunovEstimate& est, bool with_curve) {
    nlohmann::json j = {{"mle", est.mle}, {"fit_residual", est.fit_residual}, {"pairs", est.pairs}};
    if (with_curve) {
        nlohmann::json curve = nlohmann::json::array();
        for (const auto& [t, y] : est.divergence_curve) curve.push_back({t, y});
        j["divergence_curve"] = std::move(curve);
    }
    return j;
}

nlohmann::json to_json(const AmplitudeTrend& trend) {
    return {{"initial_amplitude", trend.initial}, {"terminal_amplitude", trend.terminal}, {"blowup", trend.blowup}};
}

nlohmann::json to_json(const Trajectory& traj, bool with_values) {
    nlohmann::json j = {{"t0", traj.t0}, {"step", traj.step}, {"samples", traj.values.size()}};
    j["blowup"] = traj.blowup ? nlohmann::json{{"index", traj.blowup->index}, {"value", traj.blowup->value}}
                              : nlohmann::json(nullptr);
    if (with_values) j["values"] = traj.values;
    return j;
}

} // namespace fdde
