#pragma once

// Fractional Adams-Bashforth-Moulton integration of the Caputo equation
//
//     D^alpha x(t) = f(x(t), x(t - tau)),  x(t) = history on [-tau, 0],
//
// through its Volterra form x(t) = x(0) + I^alpha f, with full memory.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fdde/dynamics.hpp"
#include "fdde/stability_map.hpp"

namespace fdde {

inline constexpr double blowup_threshold = 1e10;

/// Largest number of steps accepted by simulate (memory sum is O(steps^2)).
inline constexpr std::size_t max_steps = 2'000'000;

/// Default step 2^-7 * min(1, tau) (2^-7 when tau = 0).
double default_step(Delay tau) noexcept;

inline constexpr double default_horizon = 100.0;

struct FddeProblem {
    Rhs2 rhs;
    FractionalOrder alpha;
    Delay tau;
    double history = 0.0;  // constant value of x on [-tau, 0]
    double horizon = default_horizon;
    double step = 0.0;     // <= 0 selects default_step(tau)
};

/// Step actually used: snapped so that tau is an integer number of steps.
struct Grid {
    double step = 0.0;
    std::size_t delay_steps = 0;  // k with tau = k * step
    std::size_t steps = 0;        // floor(horizon / step)
};

/// Throws ConfigError for non-positive or non-finite step, horizon < step,
/// or more than max_steps steps.
Grid aligned_grid(Delay tau, double horizon, double step);

struct Blowup {
    std::size_t index;
    double value;
};

/// Uniformly sampled solution x(t0 + i * step).
struct Trajectory {
    double t0 = 0.0;
    double step = 0.0;
    std::vector<double> values;
    std::optional<Blowup> blowup;

    double time(std::size_t i) const noexcept { return t0 + step * static_cast<double>(i); }
    std::size_t size() const noexcept { return values.size(); }
};

/// Quadrature weights of I^alpha for the value at step n:
///   predictor[j], j = 0..n-1 (product rectangle rule),
///   corrector[j], j = 0..n   (product trapezoid rule).
/// Both include the 1/Gamma normalisation of the kernel (t - s)^(alpha-1)/Gamma(alpha).
struct KernelWeights {
    double alpha = 1.0;
    double step = 0.0;
    std::size_t n = 0;
    std::vector<double> predictor;
    std::vector<double> corrector;
};

KernelWeights kernel_weights(FractionalOrder alpha, double step, std::size_t n);

/// x(t_index - tau) with tau snapped to k = round(tau / step) samples:
/// `history` before t = 0, values[index - k] otherwise.
double delayed_value(const Trajectory& traj, std::size_t index, Delay tau, double history);

/// Full-memory predictor-corrector with one corrector pass. Stops at the first
/// sample with |x| > blowup_threshold (that sample is kept and recorded).
Trajectory simulate(const FddeProblem& problem);

/// Reference integrator for D^alpha x = g(x) without delay. Evaluates every
/// weight directly from kernel_weights, so it costs O(steps^2) pow calls;
/// meant for cross-checking simulate on small problems.
Trajectory simulate_no_delay(const std::function<double(double)>& g, FractionalOrder alpha, double x0,
                             double horizon, double step);

/// Amplitude max |x - x*| over the first and last fifth of a trajectory.
struct AmplitudeTrend {
    double initial = 0.0;
    double terminal = 0.0;
    bool blowup = false;

    /// Terminal amplitude below the initial one and no blow-up.
    bool decaying() const noexcept { return !blowup && terminal < initial; }
    /// Blow-up, or terminal amplitude above the initial one.
    bool growing() const noexcept { return blowup || terminal > initial; }
    /// No blow-up and the terminal amplitude keeps at least half the initial one.
    bool bounded_nonconverging() const noexcept { return !blowup && terminal >= 0.5 * initial; }
};

AmplitudeTrend amplitude_trend(const Trajectory& traj, double x_star);

} // namespace fdde
