#include "fdde/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "fdde/errors.hpp"

namespace fdde {

namespace {

// m^p - (m-1)^p for m >= 1, without cancellation at large m.
double first_difference(double p, std::size_t m) {
    if (m == 1) return 1.0;
    const double prev = static_cast<double>(m - 1);
    return std::pow(prev, p) * std::expm1(p * std::log1p(1.0 / prev));
}

// (m+1)^q - 2 m^q + (m-1)^q for m >= 1.
double second_difference(double q, std::size_t m) {
    const double mm = static_cast<double>(m);
    return std::pow(mm, q) * (std::expm1(q * std::log1p(1.0 / mm)) + std::expm1(q * std::log1p(-1.0 / mm)));
}

// (n-1)^(alpha+1) - (n-1-alpha) n^alpha for n >= 1: weight of f_0 in the corrector.
double initial_corrector(double alpha, std::size_t n) {
    const double nn = static_cast<double>(n);
    const double u = 1.0 / nn;
    return std::pow(nn, alpha + 1.0) * (std::expm1((alpha + 1.0) * std::log1p(-u)) + (alpha + 1.0) * u);
}

double lookup_delayed(std::span<const double> values, std::size_t index, std::size_t k, double history) {
    return index < k ? history : values[index - k];
}

bool escaped(double x) { return !std::isfinite(x) || std::abs(x) > blowup_threshold; }

} // namespace

double default_step(Delay tau) noexcept {
    constexpr double base = 1.0 / 128.0;
    return tau.value() > 0.0 ? base * std::min(1.0, tau.value()) : base;
}

Grid aligned_grid(Delay tau, double horizon, double step) {
    if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("step must be positive and finite");
    if (!std::isfinite(horizon)) throw ConfigError("horizon must be finite");
    Grid grid;
    grid.step = step;
    if (tau.value() > 0.0) {
        grid.delay_steps = static_cast<std::size_t>(std::max(1.0, std::round(tau.value() / step)));
        grid.step = tau.value() / static_cast<double>(grid.delay_steps);
    }
    if (!(horizon >= grid.step)) throw ConfigError("horizon must be at least one step");
    const double steps = std::floor(horizon / grid.step + 1e-9);
    if (steps > static_cast<double>(max_steps)) {
        throw ConfigError("grid has " + std::to_string(static_cast<long long>(steps)) + " steps; limit is " +
                          std::to_string(max_steps));
    }
    grid.steps = static_cast<std::size_t>(steps);
    return grid;
}

KernelWeights kernel_weights(FractionalOrder order, double step, std::size_t n) {
    if (n < 1) throw ConfigError("kernel_weights: n must be at least 1");
    if (!(step > 0.0)) throw ConfigError("kernel_weights: step must be positive");
    const double alpha = order.value();
    const double scale_p = std::pow(step, alpha) / std::tgamma(alpha + 1.0);
    const double scale_c = std::pow(step, alpha) / std::tgamma(alpha + 2.0);

    KernelWeights w{alpha, step, n, std::vector<double>(n), std::vector<double>(n + 1)};
    for (std::size_t j = 0; j < n; ++j) w.predictor[j] = scale_p * first_difference(alpha, n - j);
    w.corrector[0] = scale_c * initial_corrector(alpha, n);
    for (std::size_t j = 1; j < n; ++j) w.corrector[j] = scale_c * second_difference(alpha + 1.0, n - j);
    w.corrector[n] = scale_c;
    return w;
}

double delayed_value(const Trajectory& traj, std::size_t index, Delay tau, double history) {
    const std::size_t k =
        tau.value() > 0.0 ? static_cast<std::size_t>(std::max(1.0, std::round(tau.value() / traj.step))) : 0;
    if (k == 0) return traj.values[index];
    return lookup_delayed(traj.values, index, k, history);
}

Trajectory simulate(const FddeProblem& problem) {
    const double requested = problem.step > 0.0 ? problem.step : default_step(problem.tau);
    const Grid grid = aligned_grid(problem.tau, problem.horizon, requested);
    const std::size_t N = grid.steps;
    const std::size_t k = grid.delay_steps;
    const double alpha = problem.alpha.value();
    const double x0 = problem.history;
    const double scale_p = std::pow(grid.step, alpha) / std::tgamma(alpha + 1.0);
    const double scale_c = std::pow(grid.step, alpha) / std::tgamma(alpha + 2.0);

    // Lag-indexed weights stored back to front so that the memory sums for
    // step n run forward over j: weight(n - j) = reversed[N - n + j].
    std::vector<double> pred_rev(N + 1, 0.0);
    std::vector<double> corr_rev(N + 1, 0.0);
    for (std::size_t m = 1; m <= N; ++m) {
        pred_rev[N - m] = first_difference(alpha, m);
        corr_rev[N - m] = second_difference(alpha + 1.0, m);
    }

    Trajectory traj;
    traj.step = grid.step;
    traj.values.reserve(N + 1);
    traj.values.push_back(x0);
    std::vector<double> f;
    f.reserve(N + 1);

    if (escaped(x0)) {
        traj.blowup = Blowup{0, x0};
        return traj;
    }
    f.push_back(problem.rhs(x0, x0));

    for (std::size_t n = 1; n <= N; ++n) {
        const std::size_t offset = N - n;
        std::array<double, 4> sp{};
        std::array<double, 4> sc{};
        const double* fp = f.data();
        const double* wp = pred_rev.data() + offset;
        const double* wc = corr_rev.data() + offset;
        std::size_t j = 1;
        for (; j + 3 < n; j += 4) {
            for (std::size_t lane = 0; lane < 4; ++lane) {
                sp[lane] += wp[j + lane] * fp[j + lane];
                sc[lane] += wc[j + lane] * fp[j + lane];
            }
        }
        for (; j < n; ++j) {
            sp[0] += wp[j] * fp[j];
            sc[0] += wc[j] * fp[j];
        }
        const double pred_sum = first_difference(alpha, n) * fp[0] + ((sp[0] + sp[1]) + (sp[2] + sp[3]));
        const double corr_sum = initial_corrector(alpha, n) * fp[0] + ((sc[0] + sc[1]) + (sc[2] + sc[3]));

        const double predicted = x0 + scale_p * pred_sum;
        const double delayed = k == 0 ? predicted : lookup_delayed(traj.values, n, k, problem.history);
        const double corrected = x0 + scale_c * (corr_sum + problem.rhs(predicted, delayed));

        traj.values.push_back(corrected);
        if (escaped(corrected) || escaped(predicted)) {
            traj.blowup = Blowup{n, corrected};
            return traj;
        }
        f.push_back(problem.rhs(corrected, k == 0 ? corrected : lookup_delayed(traj.values, n, k, problem.history)));
    }
    return traj;
}

Trajectory simulate_no_delay(const std::function<double(double)>& g, FractionalOrder alpha, double x0,
                             double horizon, double step) {
    const Grid grid = aligned_grid(Delay(0.0), horizon, step);
    Trajectory traj;
    traj.step = grid.step;
    traj.values.push_back(x0);
    std::vector<double> f{g(x0)};
    for (std::size_t n = 1; n <= grid.steps; ++n) {
        const KernelWeights w = kernel_weights(alpha, grid.step, n);
        double predicted = x0;
        for (std::size_t j = 0; j < n; ++j) predicted += w.predictor[j] * f[j];
        double corrected = x0 + w.corrector[n] * g(predicted);
        for (std::size_t j = 0; j < n; ++j) corrected += w.corrector[j] * f[j];
        traj.values.push_back(corrected);
        if (escaped(corrected)) {
            traj.blowup = Blowup{n, corrected};
            break;
        }
        f.push_back(g(corrected));
    }
    return traj;
}

AmplitudeTrend amplitude_trend(const Trajectory& traj, double x_star) {
    AmplitudeTrend trend;
    trend.blowup = traj.blowup.has_value();
    const std::size_t n = traj.values.size();
    if (n == 0) return trend;
    const std::size_t window = std::max<std::size_t>(1, n / 5);
    auto amplitude = [&](std::size_t begin, std::size_t end) {
        double out = 0.0;
        for (std::size_t i = begin; i < end; ++i) out = std::max(out, std::abs(traj.values[i] - x_star));
        return out;
    };
    trend.initial = amplitude(0, window);
    trend.terminal = amplitude(n - window, n);
    return trend;
}

} // namespace fdde
