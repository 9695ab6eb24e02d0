#include "fdde/dynamics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <utility>

#include "fdde/errors.hpp"

namespace fdde {

namespace {

struct BuiltinRhs {
    std::string id;
    std::string formula;
    double (*fn)(double, double);
};

// Right-hand sides of the worked examples, written out directly rather than parsed.
const std::vector<BuiltinRhs>& builtins() {
    static const std::vector<BuiltinRhs> table = {
        {"ex1", "2*x - x^2 - xd^3 - 4*xd", [](double x, double y) { return 2.0 * x - x * x - y * y * y - 4.0 * y; }},
        {"ex1-linear", "-1.5*x - 5*xd", [](double x, double y) { return -1.5 * x - 5.0 * y; }},
        {"ex2", "-9*x - x^2 - 10.9*xd - xd^3",
         [](double x, double y) { return -10.9 * y - y * y * y - x * x - 9.0 * x; }},
        {"ex2-positive-a", "9*x - 9.03*xd", [](double x, double y) { return 9.0 * x - 9.03 * y; }},
        {"ex3", "-x - x^2 - 1.5*xd - xd^3", [](double x, double y) { return -x - x * x - 1.5 * y - y * y * y; }},
        {"sec5", "x - x^2 + 5*xd - xd^3", [](double x, double y) { return x - x * x + 5.0 * y - y * y * y; }},
    };
    return table;
}

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

Rhs2::Rhs2(Origin origin, std::string source, std::string formula, std::function<double(double, double)> fn,
           std::optional<expr::Expression> expression)
    : origin_(origin), source_(std::move(source)), formula_(std::move(formula)), fn_(std::move(fn)),
      expression_(std::move(expression)) {}

Rhs2 Rhs2::parsed(std::string_view text) {
    auto expression = expr::Expression::parse(text);
    auto fn = [expression](double x, double xd) { return expression.evaluate(x, xd); };
    return Rhs2(Origin::Parsed, std::string(text), expression.to_string(), std::move(fn), expression);
}

Rhs2 Rhs2::builtin(std::string_view id) {
    for (const auto& entry : builtins()) {
        if (entry.id == id) return Rhs2(Origin::Builtin, entry.id, entry.formula, entry.fn, std::nullopt);
    }
    throw ConfigError("unknown builtin right-hand side '" + std::string(id) + "'");
}

Rhs2 Rhs2::linear(SystemParams p) {
    std::string text = (p.a < 0 ? "-" + shortest(-p.a) : shortest(p.a)) + "*x";
    text += (p.b < 0 ? " - " + shortest(-p.b) : " + " + shortest(p.b)) + "*xd";
    return parsed(text);
}

const std::vector<std::string>& builtin_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> out;
        for (const auto& entry : builtins()) out.push_back(entry.id);
        return out;
    }();
    return ids;
}

std::vector<double> find_equilibria(const Rhs2& rhs, double lo, double hi, std::size_t grid) {
    if (!(lo < hi) || grid < 2) throw ConfigError("find_equilibria: need lo < hi and grid >= 2");
    auto g = [&](double x) { return rhs(x, x); };

    std::vector<double> roots;
    const double step = (hi - lo) / static_cast<double>(grid - 1);
    double x_prev = lo;
    double g_prev = g(lo);
    if (g_prev == 0.0) roots.push_back(lo);
    for (std::size_t i = 1; i < grid; ++i) {
        const double x = (i + 1 == grid) ? hi : lo + step * static_cast<double>(i);
        const double gx = g(x);
        if (gx == 0.0) {
            roots.push_back(x);
        } else if (g_prev != 0.0 && std::signbit(gx) != std::signbit(g_prev)) {
            // Bisect to the end of double resolution; 1e-10 is the minimum required.
            double l = x_prev;
            double h = x;
            double gl = g_prev;
            while (true) {
                const double mid = 0.5 * (l + h);
                if (mid <= l || mid >= h) break;
                const double gm = g(mid);
                if (gm == 0.0) {
                    l = h = mid;
                    break;
                }
                if (std::signbit(gm) == std::signbit(gl)) {
                    l = mid;
                    gl = gm;
                } else {
                    h = mid;
                }
            }
            const double root = std::abs(g(l)) <= std::abs(g(h)) ? l : h;
            // Sign changes across poles of rational right-hand sides are not roots.
            if (std::abs(g(root)) <= equilibrium_residual) roots.push_back(root);
        }
        x_prev = x;
        g_prev = gx;
    }

    std::sort(roots.begin(), roots.end());
    std::vector<double> unique;
    for (double r : roots) {
        if (unique.empty() || std::abs(r - unique.back()) > 1e-9 * std::max(1.0, std::abs(r))) unique.push_back(r);
    }
    return unique;
}

Equilibrium linearize(const Rhs2& rhs, double x_star) {
    const double h = 1e-6 * std::max(1.0, std::abs(x_star));
    auto richardson = [&](auto&& partial) {
        const double coarse = partial(h);
        const double fine = partial(h / 2.0);
        return (4.0 * fine - coarse) / 3.0;
    };
    const double a = richardson([&](double s) { return (rhs(x_star + s, x_star) - rhs(x_star - s, x_star)) / (2.0 * s); });
    const double b = richardson([&](double s) { return (rhs(x_star, x_star + s) - rhs(x_star, x_star - s)) / (2.0 * s); });
    return {x_star, a, b};
}

EquilibriumReport analyze_equilibrium(const Rhs2& rhs, double x_star, FractionalOrder alpha, Delay tau) {
    const double residual = rhs(x_star, x_star);
    if (!(std::abs(residual) <= equilibrium_residual)) {
        throw DomainError("analyze_equilibrium: x*=" + std::to_string(x_star) +
                          " is not an equilibrium (|f(x*,x*)|=" + std::to_string(std::abs(residual)) + ")");
    }
    EquilibriumReport report;
    report.equilibrium = linearize(rhs, x_star);
    const SystemParams p = report.equilibrium.params();
    report.region = classify_region(p);
    report.verdict = stability_verdict(p, alpha, tau);
    if (delay_dependent(p) && tau.value() > 0.0) report.critical = critical_alpha(p, tau);
    return report;
}

} // namespace fdde
