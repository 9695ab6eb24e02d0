#pragma once

// Stability atlas of the linear fractional delay equation
//
//     D^alpha x(t) = a x(t) + b x(t - tau),   0 < alpha <= 1,
//
// in the (a, b) plane: the Hopf boundary curve tau(a, b, alpha), the curves
// a0(a) and a1(a) that split the delay-dependent region into DS1/DS2/DS3,
// and the critical fractional orders at a fixed delay.

#include <optional>
#include <string_view>
#include <variant>

namespace fdde {

/// Coefficients of the linearised equation: a multiplies x(t), b multiplies x(t - tau).
struct SystemParams {
    double a = 0.0;
    double b = 0.0;
};

/// Fractional order in (0, 1].
class FractionalOrder {
public:
    /// Throws DomainError unless 0 < alpha <= 1.
    explicit FractionalOrder(double alpha);
    double value() const noexcept { return alpha_; }

private:
    double alpha_;
};

/// Non-negative, finite delay. tau = 0 is the no-delay case.
class Delay {
public:
    explicit Delay(double tau);
    double value() const noexcept { return tau_; }

private:
    double tau_;
};

enum class Region { U, S, DS1, DS2, DS3, Boundary };

std::string_view to_string(Region region) noexcept;

/// Region of the (a, b) plane. `a0` is filled for DS1-DS3, `a1` whenever the
/// line b = a - 1 exists and was used for the verdict.
struct RegionLabel {
    Region tag = Region::Boundary;
    std::optional<double> a0;
    std::optional<double> a1;
};

enum class StableSide { Above, Below };

std::string_view to_string(StableSide side) noexcept;

/// How the alpha axis splits into stable and unstable orders at a fixed delay.
namespace critical {
struct AllStable {};
struct AllUnstable {};
/// Stable for alpha on `stable_side` of alpha0.
struct Threshold {
    double alpha0;
    StableSide stable_side;
};
/// Stable only for alpha1 < alpha < alpha2.
struct Window {
    double alpha1;
    double alpha2;
};
} // namespace critical

using CriticalAlphaResult =
    std::variant<critical::AllStable, critical::AllUnstable, critical::Threshold, critical::Window>;

struct TauPeak {
    double alpha;  // alpha**
    double tau;    // tau**
};

struct TauExtrema {
    double tau_star = 0.0;       // tau(a, b, 1)
    std::optional<TauPeak> peak; // interior maximum, DS2 only
};

enum class Verdict { Stable, Unstable, Marginal };

std::string_view to_string(Verdict verdict) noexcept;

namespace tolerance {
/// Absolute tolerance on the argument of every root solve and of the alpha** search.
inline constexpr double root = 1e-8;
/// Relative band around the boundary delay reported as Marginal.
inline constexpr double marginal = 1e-10;
/// Points where b is closer than this (relative) to a region line are labelled Boundary.
inline constexpr double boundary_line = 1e-13;
} // namespace tolerance

/// True in the delay-dependent case b < -|a|, where the boundary curve exists.
bool delay_dependent(SystemParams p) noexcept;

/// Hopf boundary delay tau(a, b, alpha). The linear equation is asymptotically
/// stable for delays in [0, result) and unstable just beyond.
/// Throws DomainError when b >= -|a|.
double boundary_tau(SystemParams p, FractionalOrder alpha);

/// log(boundary_tau). Finite where boundary_tau itself under- or overflows
/// (alpha near 0), so use this to compare curve values across the whole axis.
double boundary_log_tau(SystemParams p, FractionalOrder alpha);

/// Boundary value a0(a) between DS1 and DS2: the b at which d tau / d alpha
/// vanishes at alpha = 1. Throws NoRootError when the scan finds no sign change.
double a0_of(double a);

/// Residual of the implicit a0 equation in cosine form,
/// -a/a0 - cos(-(pi/2) r / (a pi/2 + r ln r)) with r = sqrt(a0^2 - a^2).
double a0_residual(double a, double a0);

/// Boundary value a1(a) = a - 1 between DS2 and DS3. Absent when the line
/// b = a - 1 does not lie below -|a|, i.e. for a >= 1/2.
std::optional<double> a1_of(double a);

RegionLabel classify_region(SystemParams p);

/// tau* and, in DS2, the interior maximum (alpha**, tau**).
/// Throws DomainError outside b < -|a|.
TauExtrema tau_extrema(SystemParams p);

/// Splits the alpha axis at delay tau according to the region's curve shape.
/// Throws DomainError outside b < -|a| or for tau <= 0.
CriticalAlphaResult critical_alpha(SystemParams p, Delay tau);

/// Stability of the zero solution of the linear equation.
Verdict stability_verdict(SystemParams p, FractionalOrder alpha, Delay tau);

} // namespace fdde
