// Acceptance suite: one PASS/FAIL line per criterion, with the measured
// values underneath. All tolerances and runtime limits are pinned here.
//
// Exit status is 0 when every criterion passes except those listed in
// `known_failures`, and those fail only on their listed sub-checks.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "fdde/chaos.hpp"
#include "fdde/dynamics.hpp"
#include "fdde/expression.hpp"
#include "fdde/manifest.hpp"
#include "fdde/report.hpp"
#include "fdde/solver.hpp"
#include "fdde/stability_map.hpp"
#include "mittag_leffler.hpp"
#include "random_expression.hpp"

using namespace fdde;

namespace {

struct Check {
    std::string name;
    bool ok;
    std::string detail;
};

class Criterion {
public:
    void check(std::string name, bool ok, std::string detail = {}) {
        checks_.push_back({std::move(name), ok, std::move(detail)});
    }
    void close(std::string name, double tol, double got, double want) {
        const double diff = std::abs(got - want);
        check(std::move(name), diff <= tol,
              "got " + format_exact(got) + ", want " + format_exact(want) + ", |diff| " + format_short(diff) +
                  " <= " + format_short(tol));
    }
    const std::vector<Check>& checks() const { return checks_; }

private:
    std::vector<Check> checks_;
};

struct CriterionDef {
    int number;
    std::string title;
    double time_limit;  // seconds
    std::function<void(Criterion&)> body;
    std::set<std::string> known_failures;  // sub-checks that cannot pass, see README
};

std::string s(double v) { return format_short(v); }

template <class T>
const T* get(const CriticalAlphaResult& r) {
    return std::get_if<T>(&r);
}

// ---------------------------------------------------------------------------

void boundary_values(Criterion& c) {
    const std::pair<double, double> cases[] = {
        {-1.5, -4.31582}, {2.0, -2.33343}, {-9.0, -11.5972}, {-3.0, -4.10117}, {9.0, -9.06263}};
    for (auto [a, want] : cases) c.close("a0_of(" + s(a) + ")", 1e-4, a0_of(a), want);
    const auto m9 = a1_of(-9.0);
    const auto m1 = a1_of(-1.0);
    c.check("a1_of(-9) == -10", m9 && *m9 == -10.0, m9 ? "got " + format_exact(*m9) : "absent");
    c.check("a1_of(-1) == -2", m1 && *m1 == -2.0, m1 ? "got " + format_exact(*m1) : "absent");
}

void boundary_curve(Criterion& c) {
    c.close("boundary_tau(-9, -10.9, 1)", 1e-4, boundary_tau({-9, -10.9}, FractionalOrder(1.0)), 0.413437);
    c.close("boundary_tau(9, -9.03, 1)", 1e-4, boundary_tau({9, -9.03}, FractionalOrder(1.0)), 0.110865);
    c.close("boundary_tau(-3, -7, 0.93777)", 5e-4, boundary_tau({-3, -7}, FractionalOrder(0.93777)), 0.31);
}

void critical_orders(Criterion& c) {
    const double tol = 1e-4;
    auto threshold = [&](std::string name, SystemParams p, double tau, double want, StableSide side) {
        const auto r = critical_alpha(p, Delay(tau));
        const auto* t = get<critical::Threshold>(r);
        if (!t) {
            c.check(name, false, "got " + describe(r));
            return;
        }
        c.close(name, tol, t->alpha0, want);
        c.check(name + " stable side", t->stable_side == side, describe(r));
    };
    auto window = [&](std::string name, SystemParams p, double tau, double w1, double w2) {
        const auto r = critical_alpha(p, Delay(tau));
        const auto* w = get<critical::Window>(r);
        if (!w) {
            c.check(name, false, "got " + describe(r));
            return;
        }
        c.close(name + " alpha1", tol, w->alpha1, w1);
        c.close(name + " alpha2", tol, w->alpha2, w2);
    };
    threshold("(-9, -10.9, tau 0.38)", {-9, -10.9}, 0.38, 0.384137, StableSide::Above);
    window("(-9, -10.9, tau 0.45)", {-9, -10.9}, 0.45, 0.454118, 0.919559);
    threshold("(2, -4, tau 0.12)", {2, -4}, 0.12, 0.583977, StableSide::Above);
    threshold("(9, -9.03, tau 0.1)", {9, -9.03}, 0.1, 0.906205, StableSide::Above);
    window("(9, -9.03, tau 0.111)", {9, -9.03}, 0.111, 0.986534, 0.99529);
    threshold("(-1, -1.5, tau 2.5)", {-1, -1.5}, 2.5, 0.904463, StableSide::Below);
    threshold("(-3, -7, tau 0.31)", {-3, -7}, 0.31, 0.93777, StableSide::Above);
    const TauExtrema e = tau_extrema({-9, -10.9});
    c.check("tau_extrema(-9, -10.9) has a peak", e.peak.has_value());
    if (e.peak) {
        c.close("alpha**", tol, e.peak->alpha, 0.653835);
        c.close("tau**", tol, e.peak->tau, 0.524926);
    }
}

void simulations(Criterion& c) {
    for (const auto& entry : manifest()) {
        for (std::size_t i = 0; i < entry.runs.size(); ++i) {
            const ManifestRun& run = entry.runs[i];
            const RunResult r = run_manifest(entry, run);
            std::string detail = run.rhs + " alpha=" + s(run.alpha) + " tau=" + s(run.tau) + ": expected " +
                                 std::string(to_string(run.expected)) + ", observed " +
                                 std::string(to_string(r.observed)) + ", amplitude " + s(r.trend.initial) + " -> " +
                                 s(r.trend.terminal) + (r.trajectory.blowup ? " (blow-up)" : "");
            if (r.lyapunov) detail += ", mle " + s(r.lyapunov->mle);
            c.check(entry.id + " run " + std::to_string(i + 1), r.matched, detail);
        }
    }
}

void chaos(Criterion& c) {
    const Rhs2 f = Rhs2::builtin("sec5");
    const double x_star = 2.0;

    const Trajectory chaotic = simulate(FddeProblem{f, FractionalOrder(0.27), Delay(0.31), x_star + 0.1, 100.0, 0.0});
    const AmplitudeTrend trend = amplitude_trend(chaotic, x_star);
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = chaotic.size() * 3 / 10; i < chaotic.size(); ++i) {
        lo = std::min(lo, chaotic.values[i]);
        hi = std::max(hi, chaotic.values[i]);
    }
    c.check("alpha 0.27: no blow-up", !chaotic.blowup.has_value());
    c.check("alpha 0.27: bounded, |x - x*| < 10 after the transient", std::abs(lo - x_star) < 10 && std::abs(hi - x_star) < 10,
            "range [" + s(lo) + ", " + s(hi) + "]");
    c.check("alpha 0.27: not converging, terminal amplitude >= 0.5 * initial", trend.bounded_nonconverging(),
            "amplitude " + s(trend.initial) + " -> " + s(trend.terminal));
    const EmbeddingConfig cfg = EmbeddingConfig::defaults_for(0.31, chaotic.step, 9.885276);
    const LyapunovEstimate est = mle(chaotic, cfg);
    c.check("alpha 0.27: mle > 0", est.mle > 0.0,
            "mle " + s(est.mle) + " (m=" + std::to_string(cfg.dimension) + ", L=" + std::to_string(cfg.lag) +
                ", fit " + std::to_string(cfg.fit_min) + ".." + std::to_string(cfg.fit_max) + ", residual " +
                s(est.fit_residual) + ")");

    const Trajectory stable = simulate(FddeProblem{f, FractionalOrder(1.0), Delay(0.31), x_star + 0.1, 100.0, 0.0});
    const AmplitudeTrend st = amplitude_trend(stable, x_star);
    c.check("alpha 1: converges to x* = 2, terminal amplitude <= 1e-2", !stable.blowup && st.terminal <= 1e-2,
            "amplitude " + s(st.initial) + " -> " + s(st.terminal) + ", x(T) = " + format_exact(stable.values.back()));
}

void properties(Criterion& c) {
    constexpr double pi = std::numbers::pi;

    double worst = 0.0;
    for (double a = -20.0; a <= 20.0; a += 0.5) worst = std::max(worst, std::abs(a0_residual(a, a0_of(a))));
    c.check("a0 residual <= 1e-8 on a in [-20, 20] step 0.5", worst <= 1e-8, "max " + s(worst));

    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ua(-12.0, 12.0), gap(0.01, 8.0), frac(0.05, 1.5);
    worst = 0.0;
    int roots = 0;
    for (int i = 0; i < 300; ++i) {
        const double a = ua(rng);
        const SystemParams p{a, -std::abs(a) - gap(rng)};
        if (classify_region(p).tag == Region::Boundary) continue;
        const double tau = frac(rng) * tau_extrema(p).tau_star;
        const auto r = critical_alpha(p, Delay(tau));
        std::vector<double> found;
        if (const auto* t = get<critical::Threshold>(r)) found = {t->alpha0};
        if (const auto* w = get<critical::Window>(r)) found = {w->alpha1, w->alpha2};
        for (double alpha : found) {
            worst = std::max(worst, std::abs(boundary_tau(p, FractionalOrder(alpha)) - tau) / std::max(1.0, tau));
            ++roots;
        }
    }
    c.check("root consistency |tau(alpha_root) - tau| <= 1e-6", worst <= 1e-6 && roots > 100,
            std::to_string(roots) + " roots, max " + s(worst));

    auto monotone = [](SystemParams p, int sign) {
        double prev = boundary_log_tau(p, FractionalOrder(1e-3));
        for (int i = 2; i <= 1000; ++i) {
            const double v = boundary_log_tau(p, FractionalOrder(i / 1000.0));
            if (sign * (v - prev) <= 0.0) return false;
            prev = v;
        }
        return true;
    };
    bool ok = true;
    for (SystemParams p : {SystemParams{-3, -7}, {2, -4}, {-1.5, -5}, {0, -4}, {9, -10}}) {
        ok = ok && classify_region(p).tag == Region::DS1 && monotone(p, +1);
    }
    c.check("DS1 strictly increasing on a 1000-point alpha grid", ok);
    ok = true;
    for (SystemParams p : {SystemParams{-1, -1.5}, {-9, -9.5}, {-0.2, -0.5}, {-5, -5.9}}) {
        ok = ok && classify_region(p).tag == Region::DS3 && monotone(p, -1);
    }
    c.check("DS3 strictly decreasing on a 1000-point alpha grid", ok);

    worst = 0.0;
    for (double a : {-2.0, -5.0, -9.0}) {
        worst = std::max(worst, std::abs(boundary_tau({a, a - 1}, FractionalOrder(1e-3)) - pi));
    }
    c.check("|tau(a, a - 1, 1e-3) - pi| < 0.05 for a = -2, -5, -9", worst < 0.05, "max " + s(worst));

    worst = 0.0;
    for (double b : {-0.25, -0.5, -1.0, -3.0, -10.0, -1e3}) {
        const double want = pi / (2 * std::abs(b));
        worst = std::max(worst, std::abs(boundary_tau({0, b}, FractionalOrder(1.0)) - want) / want);
    }
    c.check("tau(0, b, 1) = pi / (2|b|), relative error <= 4e-16", worst <= 4e-16, "max " + s(worst));

    {
        const Trajectory t =
            simulate(FddeProblem{Rhs2::parsed("-x"), FractionalOrder(0.6), Delay(0.0), 1.0, 2.0, 1.0 / 1024});
        double err = 0.0;
        for (std::size_t i = 1; i < t.size(); ++i) {
            err = std::max(err, std::abs(t.values[i] - testing::mittag_leffler(0.6, -std::pow(t.time(i), 0.6))));
        }
        c.check("D^0.6 x = -x vs E_0.6(-t^0.6) on [0, 2], sup error <= 1e-3", err <= 1e-3, "sup " + s(err));
    }

    {
        bool exact = true;
        const Trajectory a =
            simulate(FddeProblem{Rhs2::builtin("sec5"), FractionalOrder(0.27), Delay(0.31), 2.0, 20.0, 0.0});
        for (double v : a.values) exact = exact && v == 2.0;
        const Trajectory b = simulate(FddeProblem{Rhs2::builtin("ex2"), FractionalOrder(0.6), Delay(0.45), 0.0, 20.0, 0.0});
        for (double v : b.values) exact = exact && v == 0.0;
        c.check("equilibrium history gives an exactly constant trajectory", exact);
    }

    {
        std::string detail;
        bool all = true;
        for (auto [p, alpha] : {std::pair{SystemParams{-9, -10.9}, 0.7}, {SystemParams{2, -4}, 0.8},
                                {SystemParams{-1, -1.5}, 0.6}, {SystemParams{-3, -7}, 0.95}}) {
            const double tb = boundary_tau(p, FractionalOrder(alpha));
            const Rhs2 f = Rhs2::linear(p);
            const auto below = amplitude_trend(
                simulate(FddeProblem{f, FractionalOrder(alpha), Delay(0.95 * tb), 0.1, default_horizon, 0.0}), 0.0);
            const auto above = amplitude_trend(
                simulate(FddeProblem{f, FractionalOrder(alpha), Delay(1.05 * tb), 0.1, default_horizon, 0.0}), 0.0);
            all = all && below.decaying() && above.growing();
            if (!detail.empty()) detail += "; ";
            detail += "(" + s(p.a) + "," + s(p.b) + "," + s(alpha) + "): " + s(below.terminal / below.initial) + " / " +
                      (above.blowup ? std::string("blow-up") : s(above.terminal / above.initial));
        }
        c.check("Hopf crossing: decay at 0.95 x boundary delay, growth at 1.05 x", all,
                "terminal/initial amplitude " + detail);
    }

    {
        std::mt19937_64 pts(99);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        int bad_value = 0, bad_trip = 0;
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            const double x = u(pts), xd = u(pts);
            testing::ExpressionGenerator gen(seed, x, xd);
            const auto g = gen.make(5);
            const auto e = expr::Expression::parse(g.text);
            if (!testing::same_bits(e.evaluate(x, xd), g.value)) ++bad_value;
            const auto again = expr::Expression::parse(e.to_string());
            if (!(again == e) || !testing::same_bits(again.evaluate(x, xd), g.value)) ++bad_trip;
        }
        c.check("parser: 1000 random expressions, oracle value and round trip", bad_value == 0 && bad_trip == 0,
                std::to_string(bad_value) + " value mismatches, " + std::to_string(bad_trip) + " round-trip mismatches");
    }
}

} // namespace

int main() {
    const std::vector<CriterionDef> criteria = {
        {1, "boundary values a0, a1", 1.0, boundary_values, {"a0_of(2)", "a0_of(-9)", "a0_of(-3)"}},
        {2, "boundary curve values", 1.0, boundary_curve, {}},
        {3, "critical orders and the DS2 peak", 5.0, critical_orders, {}},
        {4, "qualitative simulation verdicts of every example", 120.0, simulations, {}},
        {5, "chaos at alpha 0.27, convergence at alpha 1", 300.0, chaos, {}},
        {6, "property suites", 180.0, properties, {}},
    };

    int unexpected = 0;
    int passed = 0;
    std::vector<int> known;
    for (const auto& def : criteria) {
        Criterion c;
        const auto start = std::chrono::steady_clock::now();
        std::string crashed;
        try {
            def.body(c);
        } catch (const std::exception& e) {
            crashed = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        bool ok = crashed.empty() && secs < def.time_limit;
        bool only_known = crashed.empty() && secs < def.time_limit;
        for (const auto& ch : c.checks()) {
            ok = ok && ch.ok;
            if (!ch.ok && !def.known_failures.count(ch.name)) only_known = false;
        }
        std::printf("%s criterion %d: %s (%.2f s, limit %.0f s)\n", ok ? "PASS" : "FAIL", def.number,
                    def.title.c_str(), secs, def.time_limit);
        for (const auto& ch : c.checks()) {
            const bool is_known = !ch.ok && def.known_failures.count(ch.name);
            std::printf("    %s %s%s%s%s\n", ch.ok ? "ok  " : "FAIL", ch.name.c_str(), ch.detail.empty() ? "" : ": ",
                        ch.detail.c_str(), is_known ? " [known, see README]" : "");
        }
        if (!crashed.empty()) std::printf("    FAIL exception: %s\n", crashed.c_str());
        if (ok) {
            ++passed;
        } else if (only_known && !def.known_failures.empty()) {
            known.push_back(def.number);
        } else {
            ++unexpected;
        }
    }
    std::printf("%d of %zu criteria passed", passed, criteria.size());
    if (!known.empty()) {
        std::printf("; known failure in criterion");
        for (int n : known) std::printf(" %d", n);
    }
    std::printf("; %d unexpected failure%s\n", unexpected, unexpected == 1 ? "" : "s");
    return unexpected == 0 ? 0 : 1;
}
