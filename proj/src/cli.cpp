#include "fdde/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "fdde/chaos.hpp"
#include "fdde/dynamics.hpp"
#include "fdde/errors.hpp"
#include "fdde/manifest.hpp"
#include "fdde/report.hpp"
#include "fdde/solver.hpp"
#include "fdde/stability_map.hpp"

namespace fdde {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// ---- configuration files ---------------------------------------------------

// Removes --config PATH (or --config=PATH) from args and returns the path.
std::optional<std::string> take_config_path(std::vector<std::string>& args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size();) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw ConfigError("--config needs a file argument");
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    return path;
}

// Turns a flat JSON object into command-line tokens. They are placed ahead of
// the user's own flags, so flags given on the command line win.
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config file '" + path + "' must hold a JSON object");

    std::vector<std::string> tokens;
    for (const auto& [key, value] : doc.items()) {
        if (key == "id") {
            if (!value.is_string()) throw ConfigError("config key 'id' must be a string");
            tokens.push_back(value.get<std::string>());
            continue;
        }
        const std::string flag = (key.size() == 1 ? "-" : "--") + key;
        if (value.is_boolean()) {
            if (value.get<bool>()) tokens.push_back(flag);
        } else if (value.is_number()) {
            tokens.push_back(flag);
            tokens.push_back(value.is_number_float() ? format_exact(value.get<double>()) : value.dump());
        } else if (value.is_string()) {
            tokens.push_back(flag);
            tokens.push_back(value.get<std::string>());
        } else if (!value.is_null()) {
            throw ConfigError("config key '" + key + "' must be a number, string or boolean");
        }
    }
    return tokens;
}

// ---- shared option groups --------------------------------------------------

struct RhsOptions {
    std::optional<std::string> text;
    std::optional<std::string> builtin;
    std::optional<double> a;
    std::optional<double> b;
};

void add_rhs_options(CLI::App* cmd, RhsOptions& o) {
    cmd->add_option("--rhs", o.text, "right-hand side f(x, xd), e.g. \"x - x^2 + 5*xd - xd^3\"");
    std::string ids;
    for (const auto& id : builtin_ids()) ids += (ids.empty() ? "" : ", ") + id;
    cmd->add_option("--builtin", o.builtin, "built-in right-hand side: " + ids);
    cmd->add_option("-a", o.a, "linear right-hand side a*x + b*xd (with -b)");
    cmd->add_option("-b", o.b, "linear right-hand side a*x + b*xd (with -a)");
}

Rhs2 resolve_rhs(const RhsOptions& o) {
    const int given = int(o.text.has_value()) + int(o.builtin.has_value()) + int(o.a || o.b);
    if (given != 1) throw ConfigError("give exactly one of --rhs, --builtin, or -a/-b");
    if (o.text) return Rhs2::parsed(*o.text);
    if (o.builtin) return Rhs2::builtin(*o.builtin);
    if (!o.a || !o.b) throw ConfigError("a linear right-hand side needs both -a and -b");
    return Rhs2::linear({*o.a, *o.b});
}

struct SimOptions {
    RhsOptions rhs;
    double alpha = 1.0;
    double tau = 0.0;
    double x_star = 0.0;
    std::optional<double> history;
    double horizon = default_horizon;
    double step = 0.0;
};

void add_sim_options(CLI::App* cmd, SimOptions& o) {
    add_rhs_options(cmd, o.rhs);
    cmd->add_option("--alpha", o.alpha, "fractional order in (0, 1]")->required();
    cmd->add_option("--tau", o.tau, "delay")->capture_default_str();
    cmd->add_option("--x-star", o.x_star, "equilibrium the amplitude is measured from")->capture_default_str();
    cmd->add_option("--history", o.history, "constant history on [-tau, 0] (default x* + 0.1)");
    cmd->add_option("--horizon", o.horizon, "final time")->capture_default_str();
    cmd->add_option("--step", o.step, "step size (default 2^-7 * min(1, tau)), snapped to divide tau");
}

FddeProblem make_problem(const SimOptions& o) {
    return FddeProblem{resolve_rhs(o.rhs), FractionalOrder(o.alpha), Delay(o.tau),
                       o.history.value_or(o.x_star + 0.1), o.horizon, o.step};
}

enum class Format { Text, Json, Csv };

void add_format_option(CLI::App* cmd, Format& format, std::vector<std::pair<std::string, Format>> choices) {
    cmd->add_option("--format", format, "output format")
        ->transform(CLI::CheckedTransformer(std::map<std::string, Format>(choices.begin(), choices.end())));
}

// Writes to `path`, or to `fallback` when the path is empty or "-".
void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& write) {
    if (path.empty() || path == "-") {
        write(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ConfigError("cannot write '" + path + "'");
    write(file);
    if (!file) throw ConfigError("error writing '" + path + "'");
}

unsigned thread_cap() {
    unsigned cap = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FDDE_ATLAS_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) cap = static_cast<unsigned>(v);
    }
    return cap;
}

std::string trend_text(const Trajectory& traj, const AmplitudeTrend& trend) {
    std::string verdict;
    if (traj.blowup) {
        verdict = "blow-up at t=" + format_short(traj.time(traj.blowup->index));
    } else if (trend.growing()) {
        verdict = "growing";
    } else if (trend.decaying()) {
        verdict = "decaying";
    } else {
        verdict = "bounded";
    }
    return "verdict: " + verdict + " (initial amplitude " + format_short(trend.initial) + ", terminal amplitude " +
           format_short(trend.terminal) + ")";
}

// ---- reproduce -------------------------------------------------------------

struct Task {
    const ManifestEntry* entry;
    std::size_t run;
};

struct TaskOutcome {
    std::optional<RunResult> result;
    std::string error;
};

std::vector<TaskOutcome> run_tasks(const std::vector<Task>& tasks) {
    std::vector<TaskOutcome> outcomes(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                outcomes[i].result = run_manifest(*tasks[i].entry, tasks[i].entry->runs[tasks[i].run]);
            } catch (const std::exception& e) {
                outcomes[i].error = e.what();
            }
        }
    };
    const unsigned n = std::min<unsigned>(thread_cap(), static_cast<unsigned>(tasks.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return outcomes;
}

json run_json(const ManifestEntry& entry, const RunResult& r) {
    json j = {{"rhs", r.run.rhs},
              {"formula", Rhs2::builtin(r.run.rhs).formula()},
              {"x_star", r.run.x_star},
              {"alpha", r.run.alpha},
              {"tau", r.run.tau},
              {"history", r.run.x_star + entry.history_offset},
              {"horizon", entry.horizon},
              {"expected", to_string(r.run.expected)},
              {"observed", to_string(r.observed)},
              {"matched", r.matched},
              {"trend", to_json(r.trend)},
              {"trajectory", to_json(r.trajectory, false)}};
    j["embedding"] = r.embedding ? to_json(*r.embedding) : json(nullptr);
    j["lyapunov"] = r.lyapunov ? to_json(*r.lyapunov, false) : json(nullptr);
    return j;
}

void write_artifacts(const fs::path& dir, const ManifestEntry& entry, const std::vector<const RunResult*>& runs) {
    fs::create_directories(dir);
    json summary = {{"format_version", json_format_version}, {"id", entry.id}, {"title", entry.title}};
    json list = json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const RunResult& r = *runs[i];
        const std::string stem = "run" + std::to_string(i + 1);
        emit((dir / (stem + ".csv")).string(), std::cout, [&](std::ostream& os) { write_trajectory_csv(os, r.trajectory); });
        if (r.lyapunov) {
            emit((dir / (stem + "-divergence.csv")).string(), std::cout, [&](std::ostream& os) {
                write_pairs_csv(os, "time", "mean_log_distance", r.lyapunov->divergence_curve);
            });
            const auto xy = attractor_xy(r.trajectory, Delay(r.run.tau), r.embedding->transient_skip);
            emit((dir / (stem + "-attractor.csv")).string(), std::cout,
                 [&](std::ostream& os) { write_pairs_csv(os, "x", "x_delayed", xy); });
        }
        list.push_back(run_json(entry, r));
    }
    summary["runs"] = std::move(list);
    emit((dir / "summary.json").string(), std::cout, [&](std::ostream& os) { os << summary.dump(2) << '\n'; });
}

int reproduce(const std::vector<const ManifestEntry*>& entries, const std::string& out_dir, std::ostream& out,
              std::ostream& err) {
    std::vector<Task> tasks;
    for (const auto* entry : entries) {
        for (std::size_t r = 0; r < entry->runs.size(); ++r) tasks.push_back({entry, r});
    }
    const auto outcomes = run_tasks(tasks);

    int status = exit_code::ok;
    std::size_t t = 0;
    std::size_t passed = 0;
    for (const auto* entry : entries) {
        std::vector<const RunResult*> runs;
        bool entry_ok = true;
        for (std::size_t r = 0; r < entry->runs.size(); ++r, ++t) {
            const ManifestRun& run = entry->runs[r];
            out << entry->id << " run " << r + 1 << ": " << run.rhs << " alpha=" << format_short(run.alpha)
                << " tau=" << format_short(run.tau) << " expected " << to_string(run.expected);
            const TaskOutcome& o = outcomes[t];
            if (!o.result) {
                out << ", error: " << o.error << '\n';
                entry_ok = false;
                continue;
            }
            out << ", observed " << to_string(o.result->observed);
            if (o.result->lyapunov) out << " (mle " << format_short(o.result->lyapunov->mle) << ")";
            out << ", amplitude " << format_short(o.result->trend.initial) << " -> "
                << format_short(o.result->trend.terminal);
            if (o.result->trajectory.blowup) out << ", blow-up";
            out << '\n';
            entry_ok = entry_ok && o.result->matched;
            runs.push_back(&*o.result);
        }
        if (runs.size() == entry->runs.size()) {
            try {
                write_artifacts(fs::path(out_dir) / entry->id, *entry, runs);
            } catch (const std::exception& e) {
                err << "error: " << e.what() << '\n';
                return exit_code::usage;
            }
        }
        out << entry->id << ": " << (entry_ok ? "verdict met" : "VERDICT MISMATCH") << '\n';
        if (entry_ok) {
            ++passed;
        } else {
            status = exit_code::mismatch;
        }
    }
    if (entries.size() > 1) out << passed << '/' << entries.size() << " examples reproduced\n";
    return status;
}

} // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args = raw_args;
    try {
        if (auto path = take_config_path(args)) {
            const auto tokens = config_tokens(*path);
            const auto at = args.empty() ? args.end() : args.begin() + 1;
            args.insert(at, tokens.begin(), tokens.end());
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::usage;
    }

    CLI::App app{"Stability atlas, simulation and chaos diagnostics for D^alpha x = f(x(t), x(t - tau))",
                 "fdde-atlas"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", "fdde-atlas 1.0");
    app.footer("Every subcommand accepts --config FILE: a JSON object whose keys are option names.\n"
               "Options given on the command line override the file.");

    std::function<int()> action;

    // classify
    double a = 0.0;
    double b = 0.0;
    Format format = Format::Text;
    auto* classify = app.add_subcommand("classify", "region of (a, b) with a0/a1");
    classify->add_option("-a", a, "coefficient of x(t)")->required();
    classify->add_option("-b", b, "coefficient of x(t - tau)")->required();
    add_format_option(classify, format, {{"text", Format::Text}, {"json", Format::Json}});
    classify->callback([&] {
        action = [&] {
            const RegionLabel label = classify_region({a, b});
            if (format == Format::Json) {
                out << to_json(label).dump() << '\n';
            } else {
                out << describe(label) << '\n';
            }
            return exit_code::ok;
        };
    });

    // boundary
    std::size_t points = 100;
    std::string out_path;
    auto* boundary = app.add_subcommand("boundary", "CSV of the boundary curve tau(a, b, alpha), alpha = i/points");
    boundary->add_option("-a", a, "coefficient of x(t)")->required();
    boundary->add_option("-b", b, "coefficient of x(t - tau)")->required();
    boundary->add_option("--points", points, "number of alpha values")->capture_default_str()->check(CLI::Range(1, 1000000));
    boundary->add_option("--out", out_path, "output file (default stdout)");
    boundary->callback([&] {
        action = [&] {
            const SystemParams p{a, b};
            if (!delay_dependent(p)) throw DomainError("boundary curve needs b < -|a|");
            std::vector<std::pair<double, double>> rows;
            rows.reserve(points);
            for (std::size_t i = 1; i <= points; ++i) {
                const double alpha = static_cast<double>(i) / static_cast<double>(points);
                rows.emplace_back(alpha, boundary_tau(p, FractionalOrder(alpha)));
            }
            emit(out_path, out, [&](std::ostream& os) { write_pairs_csv(os, "alpha", "tau", rows); });
            return exit_code::ok;
        };
    });

    // critical-alpha
    double tau = 0.0;
    auto* crit = app.add_subcommand("critical-alpha", "split of the alpha axis at a fixed delay");
    crit->add_option("-a", a, "coefficient of x(t)")->required();
    crit->add_option("-b", b, "coefficient of x(t - tau)")->required();
    crit->add_option("--tau", tau, "delay")->required();
    add_format_option(crit, format, {{"text", Format::Text}, {"json", Format::Json}});
    crit->callback([&] {
        action = [&] {
            const SystemParams p{a, b};
            const RegionLabel label = classify_region(p);
            const CriticalAlphaResult result = critical_alpha(p, Delay(tau));
            const TauExtrema ext = tau_extrema(p);
            if (format == Format::Json) {
                out << json{{"format_version", json_format_version}, {"region", to_json(label)}, {"extrema", to_json(ext)}, {"critical", to_json(result)}}.dump()
                    << '\n';
            } else {
                out << "region: " << describe(label) << '\n';
                out << "tau*: " << format_short(ext.tau_star) << '\n';
                if (ext.peak) {
                    out << "alpha**: " << format_short(ext.peak->alpha) << ", tau**: " << format_short(ext.peak->tau)
                        << '\n';
                }
                out << "critical: " << describe(result) << '\n';
            }
            return exit_code::ok;
        };
    });

    // simulate
    SimOptions sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "integrate the delay equation; CSV of (t, x) and a verdict line");
    add_sim_options(simulate_cmd, sim);
    simulate_cmd->add_option("--out", out_path, "trajectory file (default stdout; the verdict then goes to stderr)");
    format = Format::Csv;
    add_format_option(simulate_cmd, format, {{"csv", Format::Csv}, {"json", Format::Json}});
    simulate_cmd->callback([&] {
        action = [&] {
            const Trajectory traj = simulate(make_problem(sim));
            const AmplitudeTrend trend = amplitude_trend(traj, sim.x_star);
            emit(out_path, out, [&](std::ostream& os) {
                if (format == Format::Json) {
                    os << json{{"format_version", json_format_version},
                               {"trajectory", to_json(traj)},
                               {"trend", to_json(trend)}}
                              .dump()
                       << '\n';
                } else {
                    write_trajectory_csv(os, traj);
                }
            });
            (out_path.empty() || out_path == "-" ? err : out) << trend_text(traj, trend) << '\n';
            return exit_code::ok;
        };
    });

    // lyapunov
    SimOptions lsim;
    std::optional<std::size_t> dim, lag, theiler, fit_min, fit_max;
    std::optional<double> skip, expected_slope;
    std::string curve_path, attractor_path;
    auto* lyap = app.add_subcommand("lyapunov", "largest Lyapunov exponent of a simulated trajectory (JSON)");
    add_sim_options(lyap, lsim);
    lyap->add_option("--dim", dim, "embedding dimension m (default 4)");
    lyap->add_option("--lag", lag, "embedding lag in samples (default round(tau/h))");
    lyap->add_option("--theiler", theiler, "neighbour exclusion window in samples (default 2*lag)");
    lyap->add_option("--fit-min", fit_min, "first divergence step of the slope fit");
    lyap->add_option("--fit-max", fit_max, "last divergence step of the slope fit");
    lyap->add_option("--skip", skip, "fraction of samples discarded as transient (default 0.3)");
    lyap->add_option("--expected-slope", expected_slope, "sets the fit range to 1..round(0.5/(h*|slope|))");
    lyap->add_option("--out", out_path, "JSON file (default stdout)");
    lyap->add_option("--curve", curve_path, "CSV file for the divergence curve");
    lyap->add_option("--attractor", attractor_path, "CSV file for the (x(t), x(t - tau)) attractor");
    lyap->callback([&] {
        action = [&] {
            const Trajectory traj = simulate(make_problem(lsim));
            if (traj.blowup) {
                throw DomainError("trajectory blew up at t=" + format_short(traj.time(traj.blowup->index)) +
                                  "; no exponent estimated");
            }
            EmbeddingConfig cfg = EmbeddingConfig::defaults_for(lsim.tau, traj.step, expected_slope);
            if (dim) cfg.dimension = *dim;
            if (lag) {
                cfg.lag = *lag;
                if (!theiler) cfg.theiler = 2 * *lag;
            }
            if (theiler) cfg.theiler = *theiler;
            if (fit_min) cfg.fit_min = *fit_min;
            if (fit_max) cfg.fit_max = *fit_max;
            if (skip) cfg.transient_skip = *skip;
            const LyapunovEstimate est = mle(traj, cfg);
            emit(out_path, out, [&](std::ostream& os) {
                os << json{{"format_version", json_format_version},
                           {"embedding", to_json(cfg)},
                           {"step", traj.step},
                           {"estimate", to_json(est)}}
                          .dump()
                   << '\n';
            });
            if (!curve_path.empty()) {
                emit(curve_path, out, [&](std::ostream& os) {
                    write_pairs_csv(os, "time", "mean_log_distance", est.divergence_curve);
                });
            }
            if (!attractor_path.empty()) {
                const auto xy = attractor_xy(traj, Delay(lsim.tau), cfg.transient_skip);
                emit(attractor_path, out, [&](std::ostream& os) { write_pairs_csv(os, "x", "x_delayed", xy); });
            }
            return exit_code::ok;
        };
    });

    // reproduce
    std::string id;
    bool all = false;
    std::string out_dir = "fdde-atlas-out";
    auto* repro = app.add_subcommand("reproduce", "run a worked example and check its expected verdict");
    repro->add_option("id", id, "example id");
    repro->add_flag("--all", all, "run every example (parallel, capped by FDDE_ATLAS_THREADS)");
    repro->add_option("--out-dir", out_dir, "directory for CSV/JSON artifacts")->capture_default_str();
    repro->callback([&] {
        action = [&] {
            std::vector<const ManifestEntry*> entries;
            if (all) {
                if (!id.empty()) throw ConfigError("give an example id or --all, not both");
                for (const auto& e : manifest()) entries.push_back(&e);
            } else {
                if (id.empty()) throw ConfigError("give an example id or --all");
                entries.push_back(&manifest_entry(id));
            }
            return reproduce(entries, out_dir, out, err);
        };
    });

    // analyze
    SimOptions an;
    auto* analyze = app.add_subcommand("analyze", "linearise at an equilibrium and place it on the atlas");
    add_rhs_options(analyze, an.rhs);
    analyze->add_option("--x-star", an.x_star, "equilibrium")->capture_default_str();
    analyze->add_option("--alpha", an.alpha, "fractional order in (0, 1]")->capture_default_str();
    analyze->add_option("--tau", an.tau, "delay")->capture_default_str();
    add_format_option(analyze, format, {{"text", Format::Text}, {"json", Format::Json}});
    analyze->callback([&] {
        action = [&] {
            const EquilibriumReport r =
                analyze_equilibrium(resolve_rhs(an.rhs), an.x_star, FractionalOrder(an.alpha), Delay(an.tau));
            if (format == Format::Json) {
                out << to_json(r).dump() << '\n';
            } else {
                out << "x*: " << format_short(r.equilibrium.x_star) << ", a=" << format_short(r.equilibrium.a)
                    << ", b=" << format_short(r.equilibrium.b) << '\n';
                out << "region: " << describe(r.region) << '\n';
                out << "verdict: " << to_string(r.verdict) << '\n';
                if (r.critical) out << "critical: " << describe(*r.critical) << '\n';
            }
            return exit_code::ok;
        };
    });

    // equilibria
    RhsOptions eq_rhs;
    double lo = -5.0;
    double hi = 5.0;
    std::size_t grid = 2001;
    auto* equilibria = app.add_subcommand("equilibria", "roots of f(x, x) on [lo, hi]");
    add_rhs_options(equilibria, eq_rhs);
    equilibria->add_option("--lo", lo, "interval start")->capture_default_str();
    equilibria->add_option("--hi", hi, "interval end")->capture_default_str();
    equilibria->add_option("--grid", grid, "scan points")->capture_default_str();
    equilibria->callback([&] {
        action = [&] {
            for (double x : find_equilibria(resolve_rhs(eq_rhs), lo, hi, grid)) out << format_exact(x) << '\n';
            return exit_code::ok;
        };
    });

    // Text is the default for every command except simulate.
    for (auto* cmd : {classify, crit, analyze}) {
        cmd->preparse_callback([&](std::size_t) { format = Format::Text; });
    }
    simulate_cmd->preparse_callback([&](std::size_t) { format = Format::Csv; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        return action();
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::usage;
    }
}

} // namespace fdde
