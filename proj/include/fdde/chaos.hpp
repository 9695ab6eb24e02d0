#pragma once

// Chaos diagnostics for simulated trajectories: the (x(t), x(t - tau))
// attractor, delay-coordinate embedding, and a Rosenstein-style estimate of
// the largest Lyapunov exponent.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fdde/solver.hpp"

namespace fdde {

struct EmbeddingConfig {
    std::size_t dimension = 4;      // m
    std::size_t lag = 1;            // L, samples
    std::size_t theiler = 2;        // temporal exclusion window for neighbours, samples
    std::size_t fit_min = 10;       // first divergence step used in the slope fit
    std::size_t fit_max = 200;      // last divergence step (also the tracking horizon)
    double transient_skip = 0.3;    // fraction of leading samples discarded

    /// Throws ConfigError unless m >= 2, L >= 1, fit_min < fit_max, 0 <= skip < 1.
    void validate() const;

    /// m = 4, L = round(tau / step), theiler = 2L, skip = 0.3. The fit range is
    /// 1..round(0.5 / (step * |expected_slope|)) when an expected slope is
    /// supplied, otherwise 10..200.
    static EmbeddingConfig defaults_for(double tau, double step, std::optional<double> expected_slope = std::nullopt);
};

/// Points v_i = (x_i, x_{i+L}, ..., x_{i+(m-1)L}) stored row-major.
class PointSet {
public:
    PointSet(std::size_t dimension, std::vector<double> coords);

    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return coords_.size() / dimension_; }
    std::span<const double> operator[](std::size_t i) const {
        return {coords_.data() + i * dimension_, dimension_};
    }

private:
    std::size_t dimension_;
    std::vector<double> coords_;
};

struct LyapunovEstimate {
    double mle = 0.0;                                        // 1/time
    std::vector<std::pair<double, double>> divergence_curve; // (k * step, <log d_k>)
    double fit_residual = 0.0;                               // RMS residual of the slope fit
    std::size_t pairs = 0;                                   // reference/neighbour pairs used
};

/// Pairs (x(t), x(t - tau)) for every sample at or after index k + skip, where
/// k = round(tau / step) and skip = floor(transient_skip * size).
/// Throws LengthError when the trajectory does not extend past tau.
std::vector<std::pair<double, double>> attractor_xy(const Trajectory& traj, Delay tau, double transient_skip = 0.0);

/// Throws ConfigError (invalid cfg) or LengthError when
/// series.size() <= (m - 1) L + fit_max.
PointSet delay_embed(std::span<const double> series, const EmbeddingConfig& cfg);

/// Rosenstein estimator on the trajectory after the transient skip: nearest
/// neighbour outside the Theiler window, mean log separation versus k * step,
/// least-squares slope over [fit_min, fit_max].
/// Throws LengthError, ConfigError, or DegenerateError when every neighbour
/// distance is below 1e-14.
LyapunovEstimate mle(const Trajectory& traj, const EmbeddingConfig& cfg);

} // namespace fdde
