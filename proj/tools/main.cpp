#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pulselab/config.hpp"
#include "pulselab/harness.hpp"
#include "pulselab/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pulselab;

namespace {

// exit codes: 0 success, 1 computation or consistency failure, 2 usage/config/artifact errors
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Fatal {
    int code;
    std::string message;
};

[[noreturn]] void die(int code, const std::string& message) { throw Fatal{code, message}; }

json parse_json_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) die(kUsage, path.string() + ": cannot open");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        die(kUsage, path.string() + ": " + e.what());
    }
}

// first path at which two json documents differ, for mismatch messages
std::string first_difference(const json& a, const json& b, const std::string& path) {
    if (a == b) return "";
    if (a.type() != b.type() || (!a.is_object() && !a.is_array()))
        return path.empty() ? "/" : path;
    if (a.is_object()) {
        for (auto it = a.begin(); it != a.end(); ++it) {
            if (!b.contains(it.key())) return path + "/" + it.key();
            const std::string p = first_difference(it.value(), b.at(it.key()), path + "/" + it.key());
            if (!p.empty()) return p;
        }
        for (auto it = b.begin(); it != b.end(); ++it)
            if (!a.contains(it.key())) return path + "/" + it.key();
        return path.empty() ? "/" : path;
    }
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        const std::string p =
            first_difference(a[i], b[i], path + "/" + std::to_string(i));
        if (!p.empty()) return p;
    }
    return path + "/" + std::to_string(n);
}

std::string fmt(double v) { return io::format_double(v); }

Trajectory solve_run(const RunJob& job) {
    const Grid1D g = make_grid(job.n_points, job.length, job.x_left);
    const Field u0 = ricker_ic(g, job.ic.amplitude, job.ic.center, job.ic.width);
    if (job.kind == SolverKind::dispersive) return integrate(u0, job.dispersive);
    return fv_integrate(u0, job.fv);
}

std::string run_fingerprint(const Trajectory& t) {
    std::string s = io::serialize_diagnostics(t.records);
    for (std::size_t i = 0; i < t.times.size(); ++i) {
        s += fmt(t.times[i]);
        s.append(reinterpret_cast<const char*>(t.snapshots[i].data()),
                 t.snapshots[i].size() * sizeof(double));
    }
    return s;
}

void assert_seedless(const std::string& a, const std::string& b, const char* what) {
    if (a != b)
        die(kFail, std::string("seedless assertion failed: repeating the ") + what +
                       " changed its results");
}

int cmd_run(const fs::path& config, const fs::path& out, bool seedless) {
    const RunJob job = load_run_config(config);
    const json raw = parse_json_file(config);
    const Trajectory traj = solve_run(job);
    if (seedless) assert_seedless(run_fingerprint(traj), run_fingerprint(solve_run(job)), "run");
    io::write_trajectory(out, traj, json{{"config", raw}});
    std::cout << "run: " << (traj.completed ? "completed" : "FAILED")
              << " solver=" << (job.kind == SolverKind::dispersive ? "dispersive" : "finite_volume")
              << " snapshots=" << traj.times.size() << " records=" << traj.records.size()
              << " -> " << out.string() << "\n";
    if (!traj.completed) {
        std::cerr << "run did not complete: " << traj.failure_reason << "\n";
        return kFail;
    }
    return 0;
}

fs::path run_dir(const fs::path& out, std::size_t i) {
    char name[16];
    std::snprintf(name, sizeof name, "run_%04zu", i);
    return out / "runs" / name;
}

int cmd_sweep(const fs::path& config, const fs::path& out, int jobs, bool seedless) {
    const SweepConfig c = load_sweep_config(config);
    const SweepOutput sw = run_sweep(c, jobs);
    const json report = report_to_json(sw.report);
    if (seedless) {
        const SweepOutput again = run_sweep(c, jobs);
        assert_seedless(report.dump(), report_to_json(again.report).dump(), "sweep");
        for (std::size_t i = 0; i < sw.runs.size(); ++i)
            assert_seedless(run_fingerprint(sw.runs[i]), run_fingerprint(again.runs[i]),
                            "sweep");
    }

    io::write_trajectory(out / "reference", sw.reference);
    io::write_trajectory(out / "reference_doubled", sw.reference_doubled);
    for (std::size_t i = 0; i < sw.runs.size(); ++i)
        io::write_trajectory(run_dir(out, i), sw.runs[i]);
    std::ofstream(out / "report.json", std::ios::binary) << report.dump(2) << "\n";

    const auto& v = sw.report.verdicts;
    std::cout << "sweep: runs=" << sw.runs.size() << " reference_n=" << sw.reference.grid.n
              << " -> " << out.string() << "\n"
              << "verdicts: all_completed=" << v.all_completed
              << " distances_non_increasing=" << v.distances_non_increasing
              << " final_half_of_first=" << v.final_half_of_first
              << " entropy_trend_ok=" << v.entropy_trend_ok
              << " reference_converged=" << v.reference_converged << "\n";
    for (const auto& run : sw.report.runs)
        if (!run.completed)
            std::cerr << "run eps=" << fmt(run.epsilon) << " failed: " << run.failure_reason
                      << "\n";
    return v.all_completed ? 0 : kFail;
}

struct CompareSpec {
    std::vector<double> times;
    std::vector<std::string> windows; // "a,b"
    std::vector<double> p_norms;
};

int cmd_compare(const fs::path& dir_a, const fs::path& dir_b, CompareSpec spec,
                const fs::path& out, bool seedless) {
    const Trajectory a = io::read_trajectory(dir_a);
    const Trajectory b = io::read_trajectory(dir_b);

    if (spec.times.empty()) {
        for (double t : a.times) {
            bool shared = false;
            for (double s : b.times)
                if (std::fabs(s - t) <= 1e-9) shared = true;
            if (shared) spec.times.push_back(t);
        }
        if (spec.times.empty()) die(kUsage, "compare: the trajectories share no snapshot times");
    }
    std::vector<Window> windows;
    if (spec.windows.empty()) {
        const double lo = std::max(a.grid.x_left, b.grid.x_left);
        const double hi = std::min(a.grid.x_left + a.grid.length, b.grid.x_left + b.grid.length);
        windows.push_back({lo, hi});
    }
    for (const std::string& w : spec.windows) {
        const auto comma = w.find(',');
        try {
            if (comma == std::string::npos) throw std::invalid_argument(w);
            const double lo = std::stod(w.substr(0, comma));
            const double hi = std::stod(w.substr(comma + 1));
            if (!(lo < hi)) throw std::invalid_argument(w);
            windows.push_back({lo, hi});
        } catch (const std::exception&) {
            die(kUsage, "compare: --window expects 'a,b' with a < b, got '" + w + "'");
        }
    }
    if (spec.p_norms.empty()) spec.p_norms = {2.0};

    json entries = json::array();
    for (double t : spec.times)
        for (const auto& w : windows)
            for (double p : spec.p_norms) {
                const double d = compare_at(a, b, t, p, w.a, w.b, 1e-9);
                if (seedless) {
                    const double d2 = compare_at(a, b, t, p, w.a, w.b, 1e-9);
                    if (d != d2) die(kFail, "seedless assertion failed: compare is not stable");
                }
                std::cout << "t=" << fmt(t) << " window=[" << fmt(w.a) << "," << fmt(w.b)
                          << "] p=" << fmt(p) << " distance=" << fmt(d) << "\n";
                entries.push_back({{"time", t},
                                   {"window", {w.a, w.b}},
                                   {"p", p},
                                   {"value", d}});
            }
    if (!out.empty()) {
        fs::create_directories(out);
        const json doc = {{"schema", "pulselab-compare-v1"},
                          {"a", dir_a.string()},
                          {"b", dir_b.string()},
                          {"entries", entries}};
        std::ofstream(out / "compare.json", std::ios::binary) << doc.dump(2) << "\n";
    }
    return 0;
}

// ---- check: the invariant suite over stored artifacts ----

struct CheckFailure {
    std::string what;
};

void expect(bool ok, const std::string& what) {
    if (!ok) throw CheckFailure{what};
}

bool close_rel(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

// memoryless diagnostics columns recomputed from the stored snapshot;
// energy_margin carries quadrature history and is bounded instead
void check_record_matches(const DiagnosticsRecord& got, const DiagnosticsRecord& want) {
    const double tol = 1e-9;
    expect(close_rel(got.l2_u, want.l2_u, tol), "l2_u mismatch at t=" + fmt(want.t));
    expect(close_rel(got.l6_u, want.l6_u, tol), "l6_u mismatch at t=" + fmt(want.t));
    expect(close_rel(got.linf_u, want.linf_u, tol), "linf_u mismatch at t=" + fmt(want.t));
    expect(close_rel(got.mean_u, want.mean_u, tol), "mean_u mismatch at t=" + fmt(want.t));
    expect(close_rel(got.mean_P, want.mean_P, tol), "mean_P mismatch at t=" + fmt(want.t));
    expect(close_rel(got.linf_P, want.linf_P, tol), "linf_P mismatch at t=" + fmt(want.t));
    expect(close_rel(got.l2_P, want.l2_P, tol), "l2_P mismatch at t=" + fmt(want.t));
    expect(close_rel(got.l2_dxP, want.l2_dxP, tol), "l2_dxP mismatch at t=" + fmt(want.t));
    expect(close_rel(got.l2_dxxP, want.l2_dxxP, tol), "l2_dxxP mismatch at t=" + fmt(want.t));
    expect(close_rel(got.l2_dxu, want.l2_dxu, tol), "l2_dxu mismatch at t=" + fmt(want.t));
    expect(close_rel(got.l2_dxxu, want.l2_dxxu, tol), "l2_dxxu mismatch at t=" + fmt(want.t));
    expect(close_rel(got.l1_dxu_dxxu, want.l1_dxu_dxxu, tol),
           "l1_dxu_dxxu mismatch at t=" + fmt(want.t));
    expect(close_rel(got.G1, want.G1, tol), "G1 mismatch at t=" + fmt(want.t));
    expect(close_rel(got.G2, want.G2, tol), "G2 mismatch at t=" + fmt(want.t));
    expect(close_rel(got.p_identity_residual, want.p_identity_residual, tol),
           "p_identity_residual mismatch at t=" + fmt(want.t));
    expect(close_rel(got.up_identity_residual, want.up_identity_residual, tol),
           "up_identity_residual mismatch at t=" + fmt(want.t));
    expect(close_rel(got.F_right_edge, want.F_right_edge, tol),
           "F_right_edge mismatch at t=" + fmt(want.t));
}

void check_trajectory(const Trajectory& t, bool completion_required) {
    expect(!t.times.empty(), "no snapshots stored");
    expect(t.times.front() == 0.0, "first snapshot is not the initial datum");
    for (std::size_t i = 1; i < t.times.size(); ++i)
        expect(t.times[i] > t.times[i - 1], "snapshot times are not increasing");
    if (completion_required)
        expect(t.completed, "run did not complete: " + t.failure_reason);

    const bool dispersive = t.meta.kind == SolverKind::dispersive;
    const double c0 = [&] {
        const double n = lp_norm(t.snapshot(0), 2.0);
        return n * n;
    }();

    // mean-zero end to end, and the operative nonlocal term stays admissible
    for (std::size_t i = 0; i < t.times.size(); ++i) {
        const Field u = t.snapshot(i);
        expect(std::fabs(mean(u)) <= 1e-10,
               "snapshot mean drift exceeds 1e-10 at t=" + fmt(t.times[i]));
        const Field P = t.p_of_snapshot(i);
        const double linf_P = lp_norm(P, std::numeric_limits<double>::infinity());
        expect(std::fabs(mean(P)) <= 1e-12 * std::max(linf_P, 1e-300),
               "P mean normalization violated at t=" + fmt(t.times[i]));
    }

    // records at snapshot times must reproduce from the stored fields
    std::size_t matched = 0;
    for (const auto& r : t.records) {
        std::size_t snap = t.times.size();
        for (std::size_t i = 0; i < t.times.size(); ++i)
            if (std::fabs(t.times[i] - r.t) <= 1e-12) snap = i;
        if (snap == t.times.size()) continue;
        const DiagnosticsRecord again =
            record(t.snapshot(snap), t.p_of_snapshot(snap), t.meta.epsilon, t.meta.beta,
                   t.meta.gamma, r.t);
        check_record_matches(again, r);
        ++matched;
    }
    expect(matched > 0, "no diagnostics record coincides with a stored snapshot");

    for (const auto& r : t.records) {
        expect(r.p_identity_residual <= (dispersive ? 1e-8 : 1e-4),
               "elliptic identity residual too large at t=" + fmt(r.t));
        expect(r.energy_margin >= -1e-6 * std::exp(2.0 * t.meta.gamma * r.t) * c0,
               "energy budget violated at t=" + fmt(r.t));
    }
}

int check_trajectory_dir(const fs::path& dir) {
    const Trajectory t = io::read_trajectory(dir);
    check_trajectory(t, true);
    std::cout << "check: trajectory OK (" << t.times.size() << " snapshots, "
              << t.records.size() << " records)\n";
    return 0;
}

int check_sweep_dir(const fs::path& dir) {
    const json stored = parse_json_file(dir / "report.json");
    if (!stored.contains("schema") || stored.at("schema") != kReportSchema)
        die(kUsage, (dir / "report.json").string() + ": missing or unknown report schema");
    const SweepConfig c = sweep_config_from_json(
        stored.at("config"), (dir / "report.json").string() + "#/config");

    const Trajectory ref = io::read_trajectory(dir / "reference");
    const Trajectory doubled = io::read_trajectory(dir / "reference_doubled");
    check_trajectory(ref, true);
    check_trajectory(doubled, true);
    std::vector<Trajectory> runs;
    for (std::size_t i = 0; i < c.epsilons.size(); ++i) {
        runs.push_back(io::read_trajectory(run_dir(dir, i)));
        const bool said_completed = stored.at("runs").at(i).at("completed").get<bool>();
        expect(runs.back().completed == said_completed,
               "stored run " + std::to_string(i) + " disagrees with the report about completion");
        check_trajectory(runs.back(), said_completed);
    }

    const json again = report_to_json(assemble_report(c, runs, ref, doubled));
    if (again != stored) {
        const std::string where = first_difference(stored, again, "");
        die(kFail, "report is not reproducible from the stored artifacts; first mismatch at " +
                       where);
    }
    std::cout << "check: report OK (" << runs.size() << " runs, reference_n=" << ref.grid.n
              << ")\n";
    return 0;
}

int cmd_check(const fs::path& dir) {
    if (fs::exists(dir / "report.json")) return check_sweep_dir(dir);
    if (fs::exists(dir / "params.json")) return check_trajectory_dir(dir);
    die(kUsage, dir.string() + ": neither a sweep directory (report.json) nor a trajectory "
                               "directory (params.json)");
}

int cmd_mms(const fs::path& config, const fs::path& out, bool seedless) {
    const MmsJob job = load_mms_config(config);
    const Grid1D g = make_grid(job.n_points, job.length, job.x_left);

    json runs = json::array();
    std::vector<double> dts_done, l2_done;
    bool all_completed = true;
    std::vector<MmsResult> results;
    for (double dt : job.dts) {
        DispersiveParams p = job.dispersive;
        p.dt = dt;
        results.push_back(integrate_manufactured(g, p, job.exact));
        const MmsResult& r = results.back();
        if (seedless) {
            const MmsResult r2 = integrate_manufactured(g, p, job.exact);
            assert_seedless(run_fingerprint(r.traj), run_fingerprint(r2.traj), "mms run");
        }
        all_completed = all_completed && r.traj.completed;
        if (r.traj.completed) {
            dts_done.push_back(dt);
            l2_done.push_back(r.final_l2_error);
        }
        runs.push_back({{"dt", dt},
                        {"completed", r.traj.completed},
                        {"final_sup_error", r.final_sup_error},
                        {"final_l2_error", r.final_l2_error}});
        std::cout << "mms: dt=" << fmt(dt) << " sup_error=" << fmt(r.final_sup_error)
                  << " l2_error=" << fmt(r.final_l2_error)
                  << (r.traj.completed ? "" : " (FAILED)") << "\n";
    }

    double order = 0.0;
    bool order_known = false;
    if (dts_done.size() >= 2 &&
        std::all_of(l2_done.begin(), l2_done.end(), [](double v) { return v > 0.0; })) {
        order = loglog_slope(dts_done, l2_done);
        order_known = true;
        std::cout << "mms: fitted temporal order " << fmt(order) << "\n";
    }
    const bool ok = all_completed && (!order_known || order >= 3.5);

    fs::create_directories(out);
    for (std::size_t i = 0; i < results.size(); ++i) {
        std::vector<double> ts, sups, l2s;
        for (const auto& e : results[i].errors) {
            ts.push_back(e.t);
            sups.push_back(e.sup_error);
            l2s.push_back(e.l2_error);
        }
        char name[32];
        std::snprintf(name, sizeof name, "sup_error_%04zu.dat", i);
        io::write_dat(out / name, ts, sups);
        std::snprintf(name, sizeof name, "l2_error_%04zu.dat", i);
        io::write_dat(out / name, ts, l2s);
    }
    const json doc = {{"schema", "pulselab-mms-report-v1"},
                      {"grid", {{"n_points", job.n_points},
                                {"length", job.length},
                                {"x_left", job.x_left}}},
                      {"runs", runs},
                      {"temporal_order", order},
                      {"order_known", order_known},
                      {"passed", ok}};
    std::ofstream(out / "mms.json", std::ios::binary) << doc.dump(2) << "\n";
    if (!ok) std::cerr << "mms verification failed\n";
    return ok ? 0 : kFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pulselab: dispersive-regularization laboratory for the short pulse limit"};
    app.require_subcommand(1);
    bool seedless = false;
    app.add_flag("--seedless", seedless,
                 "repeat every computation and fail unless results are bitwise identical");

    std::string config, out;
    int jobs = 1;

    auto* run = app.add_subcommand("run", "integrate one solver from a run config");
    run->add_option("--config", config, "run config (json)")->required();
    run->add_option("--out", out, "output trajectory directory")->required();

    auto* sweep = app.add_subcommand("sweep", "full singular-limit experiment from a sweep config");
    sweep->add_option("--config", config, "sweep config (json)")->required();
    sweep->add_option("--out", out, "output directory (report.json, reference/, runs/)")
        ->required();
    sweep->add_option("--jobs", jobs, "max concurrent runs")->check(CLI::PositiveNumber);

    std::string dir_a, dir_b;
    CompareSpec spec;
    auto* compare = app.add_subcommand("compare", "Lp distances between two stored trajectories");
    compare->add_option("a", dir_a, "first trajectory directory")->required();
    compare->add_option("b", dir_b, "second trajectory directory")->required();
    compare->add_option("--time", spec.times, "comparison time (repeatable; default: shared snapshot times)");
    compare->add_option("--window", spec.windows, "space window 'a,b' (repeatable; default: domain overlap)");
    compare->add_option("--p", spec.p_norms, "Lp exponent (repeatable; default: 2)");
    compare->add_option("--out", out, "if set, also write compare.json here");

    std::string check_target;
    auto* check = app.add_subcommand("check", "invariant suite on a stored trajectory or sweep");
    check->add_option("dir", check_target, "trajectory or sweep directory")->required();

    auto* mms = app.add_subcommand("mms", "manufactured-solution verification runs");
    mms->add_option("--config", config, "mms config (json)")->required();
    mms->add_option("--out", out, "output directory (mms.json, error .dat files)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config, out, seedless);
        if (sweep->parsed()) return cmd_sweep(config, out, jobs, seedless);
        if (compare->parsed()) return cmd_compare(dir_a, dir_b, spec, out, seedless);
        if (check->parsed()) return cmd_check(check_target);
        if (mms->parsed()) return cmd_mms(config, out, seedless);
    } catch (const Fatal& f) {
        std::cerr << "error: " << f.message << "\n";
        return f.code;
    } catch (const CheckFailure& f) {
        std::cerr << "check failed: " << f.what << "\n";
        return kFail;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return 0;
}
