#include "fdde/stability_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "fdde/errors.hpp"
#include "numerics.hpp"

namespace fdde {

namespace {

constexpr double pi = std::numbers::pi;

void require_finite(SystemParams p) {
    if (!std::isfinite(p.a) || !std::isfinite(p.b)) {
        throw DomainError("system parameters must be finite");
    }
}

void require_delay_dependent(SystemParams p, const char* what) {
    require_finite(p);
    if (!delay_dependent(p)) {
        throw DomainError(std::string(what) + ": requires b < -|a| (got a=" + std::to_string(p.a) +
                          ", b=" + std::to_string(p.b) + ")");
    }
}

bool on_line(double b, double line) {
    return std::abs(b - line) <= tolerance::boundary_line * std::max({1.0, std::abs(b), std::abs(line)});
}

// Sign of d log(tau) / d alpha at alpha = 1, scaled by theta * r > 0:
// arccos(-a/b) (a pi/2 + r ln r) - (pi/2) r. Its zero in b is a0(a).
double slope_at_unit_order(double a, double b) {
    const double r = std::sqrt(b * b - a * a);
    const double theta = std::acos(std::clamp(-a / b, -1.0, 1.0));
    return theta * (a * pi / 2.0 + r * std::log(r)) - (pi / 2.0) * r;
}

enum class Shape { Increasing, Unimodal, Decreasing };

// Scan grid for the alpha** search: 256 uniform points on (0, 1] plus a
// geometric run towards 0 so peaks squeezed against alpha = 0 are not missed.
std::vector<double> peak_scan_grid() {
    std::vector<double> grid;
    for (int i = 0; i < 64; ++i) {
        grid.push_back(1e-6 * std::pow(1.0 / 256.0 / 1e-6, i / 64.0));
    }
    for (int i = 1; i <= 256; ++i) {
        grid.push_back(i / 256.0);
    }
    return grid;
}

std::optional<TauPeak> find_peak(SystemParams p) {
    static const std::vector<double> grid = peak_scan_grid();
    auto log_tau = [p](double alpha) { return boundary_log_tau(p, FractionalOrder(alpha)); };

    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = log_tau(grid[i]);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    // A maximum at the last grid point may still sit just inside alpha = 1,
    // so only the alpha -> 0 end is rejected outright.
    if (best == 0) return std::nullopt;
    const double lo = grid[best - 1];
    const double hi = grid[std::min(best + 1, grid.size() - 1)];
    const double alpha = detail::golden_section_max(log_tau, lo, hi, tolerance::root);
    if (alpha >= 1.0 - tolerance::root) return std::nullopt;
    return TauPeak{alpha, std::exp(log_tau(alpha))};
}

Shape shape_of(SystemParams p, const RegionLabel& label) {
    switch (label.tag) {
    case Region::DS1:
        return Shape::Increasing;
    case Region::DS2:
        return Shape::Unimodal;
    case Region::DS3:
        return Shape::Decreasing;
    default:
        break;
    }
    // On the a0 or a1 line itself. b = a0 still rises monotonically to alpha = 1;
    // b = a1 starts at tau = pi and keeps an interior maximum.
    const auto a1 = a1_of(p.a);
    if (a1 && on_line(p.b, *a1)) return Shape::Unimodal;
    return Shape::Increasing;
}

// Smallest alpha probed when bracketing towards the alpha -> 0 end.
constexpr double alpha_floor = 1e-12;

// alpha in (0, hi] where log tau - log target has the sign `want_positive`.
double small_alpha_end(SystemParams p, double log_target, bool want_positive, double hi) {
    double alpha = std::min(1e-3, hi / 2.0);
    while (alpha >= alpha_floor) {
        const double g = boundary_log_tau(p, FractionalOrder(alpha)) - log_target;
        if ((g > 0.0) == want_positive) return alpha;
        alpha /= 10.0;
    }
    throw NoRootError("critical_alpha: could not bracket the crossing near alpha = 0");
}

double crossing(SystemParams p, double log_target, double lo, double hi) {
    auto g = [&](double alpha) { return boundary_log_tau(p, FractionalOrder(alpha)) - log_target; };
    return detail::bracketed_root(g, lo, hi, 1e-3 * tolerance::root);
}

} // namespace

FractionalOrder::FractionalOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("fractional order must satisfy 0 < alpha <= 1 (got " + std::to_string(alpha) + ")");
    }
}

Delay::Delay(double tau) : tau_(tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw DomainError("delay must be finite and non-negative (got " + std::to_string(tau) + ")");
    }
}

std::string_view to_string(Region region) noexcept {
    switch (region) {
    case Region::U: return "U";
    case Region::S: return "S";
    case Region::DS1: return "DS1";
    case Region::DS2: return "DS2";
    case Region::DS3: return "DS3";
    case Region::Boundary: return "Boundary";
    }
    return "?";
}

std::string_view to_string(StableSide side) noexcept {
    return side == StableSide::Above ? "above" : "below";
}

std::string_view to_string(Verdict verdict) noexcept {
    switch (verdict) {
    case Verdict::Stable: return "stable";
    case Verdict::Unstable: return "unstable";
    case Verdict::Marginal: return "marginal";
    }
    return "?";
}

bool delay_dependent(SystemParams p) noexcept { return p.b < -std::abs(p.a); }

namespace {

// tau = angle / w^(1/alpha).
struct CurveTerms {
    double angle;
    double w;
};

CurveTerms curve_terms(SystemParams p, double alpha) {
    const double c = std::cos(alpha * pi / 2.0);
    const double s = std::sin(alpha * pi / 2.0);
    const double w = p.a * c + std::sqrt(p.b * p.b - p.a * p.a * s * s);
    double u = (w * c - p.a) / p.b;
    if (u > 1.0 && u - 1.0 < 1e-12) u = 1.0;
    if (u < -1.0 && -1.0 - u < 1e-12) u = -1.0;
    return {std::acos(u), w};
}

} // namespace

double boundary_log_tau(SystemParams p, FractionalOrder order) {
    require_delay_dependent(p, "boundary_tau");
    const CurveTerms t = curve_terms(p, order.value());
    return std::log(t.angle) - std::log(t.w) / order.value();
}

double boundary_tau(SystemParams p, FractionalOrder order) {
    require_delay_dependent(p, "boundary_tau");
    const CurveTerms t = curve_terms(p, order.value());
    const double scale = std::pow(t.w, 1.0 / order.value());
    if (std::isfinite(scale) && scale > 0.0) return t.angle / scale;
    return std::exp(std::log(t.angle) - std::log(t.w) / order.value());
}

double a0_residual(double a, double a0) {
    const double r = std::sqrt(a0 * a0 - a * a);
    return -a / a0 - std::cos(-r * (pi / 2.0) / (a * pi / 2.0 + r * std::log(r)));
}

double a0_of(double a) {
    if (!std::isfinite(a)) throw DomainError("a0_of: a must be finite");
    constexpr double first_offset = 1e-6;
    constexpr double growth = 1.05;
    constexpr double b_limit = 1e6;

    const double edge = -std::abs(a);
    double prev_b = edge - first_offset;
    double prev = slope_at_unit_order(a, prev_b);
    for (double offset = first_offset * growth; edge - offset >= -b_limit; offset *= growth) {
        const double b = edge - offset;
        const double value = slope_at_unit_order(a, b);
        if (value == 0.0) return b;
        if (std::signbit(value) != std::signbit(prev)) {
            auto f = [a](double x) { return slope_at_unit_order(a, x); };
            return detail::bracketed_root(f, b, prev_b, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(b));
        }
        prev_b = b;
        prev = value;
    }
    throw NoRootError("a0_of: no sign change for b in (-1e6, -|a|) at a=" + std::to_string(a));
}

std::optional<double> a1_of(double a) {
    // b = a - 1 must lie strictly below -|a|.
    if (a < 0.5) return a - 1.0;
    return std::nullopt;
}

RegionLabel classify_region(SystemParams p) {
    require_finite(p);
    const double a = p.a;
    const double b = p.b;
    if (on_line(b, -a)) return {Region::Boundary, {}, {}};
    if (b > -a) return {Region::U, {}, {}};
    if (a < 0.0) {
        if (on_line(b, a)) return {Region::Boundary, {}, {}};
        if (b > a) return {Region::S, {}, {}};
    }

    const double a0 = a0_of(a);
    const auto a1 = a1_of(a);
    if (on_line(b, a0) || (a1 && on_line(b, *a1))) return {Region::Boundary, {}, {}};
    if (b < a0) return {Region::DS1, a0, {}};
    if (a1 && b > *a1) return {Region::DS3, a0, a1};
    return {Region::DS2, a0, a1};
}

TauExtrema tau_extrema(SystemParams p) {
    require_delay_dependent(p, "tau_extrema");
    TauExtrema out;
    out.tau_star = boundary_tau(p, FractionalOrder(1.0));
    if (shape_of(p, classify_region(p)) == Shape::Unimodal) {
        out.peak = find_peak(p);
    }
    return out;
}

CriticalAlphaResult critical_alpha(SystemParams p, Delay delay) {
    require_delay_dependent(p, "critical_alpha");
    const double tau = delay.value();
    if (!(tau > 0.0)) throw DomainError("critical_alpha: tau must be positive");

    const double log_target = std::log(tau);
    const double tau_star = boundary_tau(p, FractionalOrder(1.0));
    const bool at_star = std::abs(tau - tau_star) <= tolerance::marginal * std::max(1.0, tau_star);

    switch (shape_of(p, classify_region(p))) {
    case Shape::Increasing: {
        if (at_star) return critical::Threshold{1.0, StableSide::Above};
        if (tau > tau_star) return critical::AllUnstable{};
        const double lo = small_alpha_end(p, log_target, false, 1.0);
        return critical::Threshold{crossing(p, log_target, lo, 1.0), StableSide::Above};
    }
    case Shape::Decreasing: {
        if (tau <= tau_star || at_star) return critical::AllStable{};
        const double lo = small_alpha_end(p, log_target, true, 1.0);
        return critical::Threshold{crossing(p, log_target, lo, 1.0), StableSide::Below};
    }
    case Shape::Unimodal: {
        const auto peak = find_peak(p);
        if (!peak) {
            // Peak merged into alpha = 1: behaves like DS1.
            if (tau >= tau_star) return critical::AllUnstable{};
            const double lo = small_alpha_end(p, log_target, false, 1.0);
            return critical::Threshold{crossing(p, log_target, lo, 1.0), StableSide::Above};
        }
        if (tau >= peak->tau) return critical::AllUnstable{};
        const double lo = small_alpha_end(p, log_target, false, peak->alpha);
        const double alpha_rise = crossing(p, log_target, lo, peak->alpha);
        if (tau < tau_star || at_star) return critical::Threshold{alpha_rise, StableSide::Above};
        const double alpha_fall = crossing(p, log_target, peak->alpha, 1.0);
        return critical::Window{alpha_rise, alpha_fall};
    }
    }
    return critical::AllUnstable{};
}

Verdict stability_verdict(SystemParams p, FractionalOrder alpha, Delay delay) {
    require_finite(p);
    if (on_line(p.b, -p.a)) return Verdict::Marginal;
    if (p.b > -p.a) return Verdict::Unstable;
    if (p.a < 0.0) {
        if (on_line(p.b, p.a)) return Verdict::Marginal;
        if (p.b > p.a) return Verdict::Stable;
    }
    const double boundary = boundary_tau(p, alpha);
    const double tau = delay.value();
    if (std::abs(tau - boundary) <= tolerance::marginal * std::max(1.0, boundary)) return Verdict::Marginal;
    return tau < boundary ? Verdict::Stable : Verdict::Unstable;
}

} // namespace fdde
