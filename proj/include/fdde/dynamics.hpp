#pragma once

// Right-hand sides f(x(t), x(t - tau)), their equilibria, and the
// linearisation that places an equilibrium on the stability atlas.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fdde/expression.hpp"
#include "fdde/stability_map.hpp"

namespace fdde {

/// Two-argument right-hand side f(x, xd) with xd = x(t - tau).
/// Immutable after construction; copies share the underlying expression.
class Rhs2 {
public:
    enum class Origin { Parsed, Builtin };

    /// Throws SyntaxError or UnknownIdentifier.
    static Rhs2 parsed(std::string_view text);

    /// One of builtin_ids(); throws ConfigError for anything else.
    static Rhs2 builtin(std::string_view id);

    /// a*x + b*xd, as a parsed expression.
    static Rhs2 linear(SystemParams p);

    double operator()(double x, double xd) const { return fn_(x, xd); }

    Origin origin() const noexcept { return origin_; }

    /// Expression text for parsed right-hand sides, example id for builtins.
    const std::string& source() const noexcept { return source_; }

    /// Human-readable formula.
    const std::string& formula() const noexcept { return formula_; }

    /// Parse tree, present for parsed right-hand sides.
    const std::optional<expr::Expression>& expression() const noexcept { return expression_; }

private:
    Rhs2(Origin origin, std::string source, std::string formula, std::function<double(double, double)> fn,
         std::optional<expr::Expression> expression);

    Origin origin_;
    std::string source_;
    std::string formula_;
    std::function<double(double, double)> fn_;
    std::optional<expr::Expression> expression_;
};

/// Identifiers accepted by Rhs2::builtin.
const std::vector<std::string>& builtin_ids();

/// Largest |f(x*, x*)| accepted as an equilibrium.
inline constexpr double equilibrium_residual = 1e-9;

struct Equilibrium {
    double x_star = 0.0;
    double a = 0.0;  // df/dx at (x*, x*)
    double b = 0.0;  // df/dxd at (x*, x*)

    SystemParams params() const noexcept { return {a, b}; }
};

/// Roots of g(x) = f(x, x) on [lo, hi], found by a sign-change scan over `grid`
/// equally spaced points and refined by bisection. Sorted and deduplicated.
/// Even-multiplicity (tangential) roots are not detected.
std::vector<double> find_equilibria(const Rhs2& rhs, double lo, double hi, std::size_t grid = 2001);

/// Partial derivatives at (x*, x*) by central differences with one Richardson step.
Equilibrium linearize(const Rhs2& rhs, double x_star);

struct EquilibriumReport {
    Equilibrium equilibrium;
    RegionLabel region;
    Verdict verdict = Verdict::Marginal;
    std::optional<CriticalAlphaResult> critical;  // delay-dependent regions only
};

/// linearize -> classify_region -> stability_verdict -> critical_alpha.
/// Throws DomainError if x_star is not an equilibrium.
EquilibriumReport analyze_equilibrium(const Rhs2& rhs, double x_star, FractionalOrder alpha, Delay tau);

} // namespace fdde
