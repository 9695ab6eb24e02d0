#include "fdde/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fdde/errors.hpp"

namespace fdde {

namespace {

constexpr double min_distance = 1e-14;

std::size_t delay_samples(double tau, double step) {
    if (tau <= 0.0) return 0;
    return static_cast<std::size_t>(std::max(1.0, std::round(tau / step)));
}

std::size_t skipped(std::size_t n, double fraction) {
    return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
}

double distance(std::span<const double> u, std::span<const double> v) {
    double s = 0.0;
    for (std::size_t d = 0; d < u.size(); ++d) {
        const double diff = u[d] - v[d];
        s += diff * diff;
    }
    return std::sqrt(s);
}

// Nearest neighbour of every reference point among points [0, count) outside
// the Theiler window. Candidates are visited in order of their first
// coordinate and the scan stops once that coordinate alone exceeds the best
// distance. Returns count for points without an admissible neighbour.
std::vector<std::size_t> nearest_neighbours(const PointSet& points, std::size_t count, std::size_t theiler) {
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        const double lv = points[l][0];
        const double rv = points[r][0];
        return lv < rv || (lv == rv && l < r);
    });
    std::vector<std::size_t> rank(count);
    for (std::size_t r = 0; r < count; ++r) rank[order[r]] = r;

    std::vector<std::size_t> neighbour(count, count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto vi = points[i];
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = count;
        auto consider = [&](std::size_t j) {
            const std::size_t gap = i > j ? i - j : j - i;
            if (gap <= theiler) return;
            const double d = distance(vi, points[j]);
            if (d > min_distance && (d < best || (d == best && j < best_j))) {
                best = d;
                best_j = j;
            }
        };
        const std::size_t r = rank[i];
        for (std::size_t up = r + 1; up < count; ++up) {
            if (points[order[up]][0] - vi[0] > best) break;
            consider(order[up]);
        }
        for (std::size_t down = r; down-- > 0;) {
            if (vi[0] - points[order[down]][0] > best) break;
            consider(order[down]);
        }
        neighbour[i] = best_j;
    }
    return neighbour;
}

} // namespace

void EmbeddingConfig::validate() const {
    if (dimension < 2) throw ConfigError("embedding dimension must be at least 2");
    if (lag < 1) throw ConfigError("embedding lag must be at least 1");
    if (!(fit_min < fit_max)) throw ConfigError("fit range needs fit_min < fit_max");
    if (!(transient_skip >= 0.0 && transient_skip < 1.0)) throw ConfigError("transient_skip must lie in [0, 1)");
}

EmbeddingConfig EmbeddingConfig::defaults_for(double tau, double step, std::optional<double> expected_slope) {
    EmbeddingConfig cfg;
    cfg.lag = std::max<std::size_t>(1, delay_samples(tau, step));
    cfg.theiler = 2 * cfg.lag;
    if (expected_slope && *expected_slope != 0.0) {
        cfg.fit_min = 1;
        const double horizon = std::round(0.5 / (step * std::abs(*expected_slope)));
        cfg.fit_max = std::max<std::size_t>(2, static_cast<std::size_t>(horizon));
    }
    return cfg;
}

PointSet::PointSet(std::size_t dimension, std::vector<double> coords)
    : dimension_(dimension), coords_(std::move(coords)) {
    if (dimension_ == 0 || coords_.size() % dimension_ != 0) throw ConfigError("PointSet: bad coordinate count");
}

std::vector<std::pair<double, double>> attractor_xy(const Trajectory& traj, Delay tau, double transient_skip) {
    if (!(transient_skip >= 0.0 && transient_skip < 1.0)) throw ConfigError("transient_skip must lie in [0, 1)");
    const std::size_t n = traj.values.size();
    const std::size_t k = delay_samples(tau.value(), traj.step);
    const std::size_t skip = skipped(n, transient_skip);
    if (n <= k + skip) {
        throw LengthError("attractor_xy: trajectory of " + std::to_string(n) + " samples does not extend past tau (" +
                          std::to_string(k) + " samples) and the transient skip");
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(n - k - skip);
    for (std::size_t i = k + skip; i < n; ++i) out.emplace_back(traj.values[i], traj.values[i - k]);
    return out;
}

PointSet delay_embed(std::span<const double> series, const EmbeddingConfig& cfg) {
    cfg.validate();
    const std::size_t span = (cfg.dimension - 1) * cfg.lag;
    if (series.size() <= span + cfg.fit_max) {
        throw LengthError("delay_embed: need more than " + std::to_string(span + cfg.fit_max) + " samples, got " +
                          std::to_string(series.size()));
    }
    const std::size_t count = series.size() - span;
    std::vector<double> coords;
    coords.reserve(count * cfg.dimension);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t d = 0; d < cfg.dimension; ++d) coords.push_back(series[i + d * cfg.lag]);
    }
    return PointSet(cfg.dimension, std::move(coords));
}

LyapunovEstimate mle(const Trajectory& traj, const EmbeddingConfig& cfg) {
    cfg.validate();
    const std::span<const double> all(traj.values);
    const std::span<const double> series = all.subspan(skipped(all.size(), cfg.transient_skip));
    const PointSet points = delay_embed(series, cfg);

    const std::size_t references = points.size() - cfg.fit_max;
    const auto neighbour = nearest_neighbours(points, references, cfg.theiler);

    std::vector<std::size_t> ref_index;
    std::vector<std::size_t> nbr_index;
    for (std::size_t i = 0; i < references; ++i) {
        if (neighbour[i] < references) {
            ref_index.push_back(i);
            nbr_index.push_back(neighbour[i]);
        }
    }
    if (ref_index.empty()) {
        throw DegenerateError("mle: every neighbour distance is below 1e-14 (constant or degenerate series)");
    }

    LyapunovEstimate est;
    est.pairs = ref_index.size();
    est.divergence_curve.reserve(cfg.fit_max + 1);
    for (std::size_t k = 0; k <= cfg.fit_max; ++k) {
        double sum = 0.0;
        std::size_t used = 0;
        for (std::size_t p = 0; p < ref_index.size(); ++p) {
            const double d = distance(points[ref_index[p] + k], points[nbr_index[p] + k]);
            if (d > 0.0) {
                sum += std::log(d);
                ++used;
            }
        }
        if (used == 0) throw DegenerateError("mle: neighbour trajectories coincide at step " + std::to_string(k));
        est.divergence_curve.emplace_back(static_cast<double>(k) * traj.step, sum / static_cast<double>(used));
    }

    // Least-squares line through the curve over [fit_min, fit_max].
    const std::size_t count = cfg.fit_max - cfg.fit_min + 1;
    double mean_t = 0.0;
    double mean_y = 0.0;
    for (std::size_t k = cfg.fit_min; k <= cfg.fit_max; ++k) {
        mean_t += est.divergence_curve[k].first;
        mean_y += est.divergence_curve[k].second;
    }
    mean_t /= static_cast<double>(count);
    mean_y /= static_cast<double>(count);
    double stt = 0.0;
    double sty = 0.0;
    for (std::size_t k = cfg.fit_min; k <= cfg.fit_max; ++k) {
        const double dt = est.divergence_curve[k].first - mean_t;
        stt += dt * dt;
        sty += dt * (est.divergence_curve[k].second - mean_y);
    }
    est.mle = sty / stt;
    double sse = 0.0;
    for (std::size_t k = cfg.fit_min; k <= cfg.fit_max; ++k) {
        const auto [t, y] = est.divergence_curve[k];
        const double r = y - (mean_y + est.mle * (t - mean_t));
        sse += r * r;
    }
    est.fit_residual = std::sqrt(sse / static_cast<double>(count));
    return est;
}

} // namespace fdde
