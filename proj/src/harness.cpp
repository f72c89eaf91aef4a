#include "pulselab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pulselab/nonlocal.hpp"

namespace pulselab {

namespace {

void ensure(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("sweep config: " + what);
}

constexpr double kTimeTol = 1e-6;
constexpr double kTrendSlack = 1.05; // 5% slack on "non-increasing"
constexpr double kAbsFloor = 1e-12;  // absolute floor for near-zero trend values

Field datum(const SweepConfig& c, const Grid1D& g) {
    return ricker_ic(g, c.ic.amplitude, c.ic.center, c.ic.width);
}

Trajectory dispersive_run(const SweepConfig& c, double eps) {
    const Grid1D g = make_grid(c.n_points, c.length, c.x_left);
    DispersiveParams p;
    p.epsilon = eps;
    p.beta = c.scaling_c * std::pow(eps, c.scaling_p);
    p.gamma = c.gamma;
    p.dt = c.dt;
    p.t_final = c.t_final;
    p.snapshot_interval = c.snapshot_interval;
    p.diagnostics_interval = c.diagnostics_interval;
    p.forced_times = c.comparison_times;
    try {
        return integrate(datum(c, g), p);
    } catch (const std::exception& e) {
        Trajectory t;
        t.grid = g;
        t.meta.kind = SolverKind::dispersive;
        t.meta.epsilon = p.epsilon;
        t.meta.beta = p.beta;
        t.meta.gamma = p.gamma;
        t.meta.dt = p.dt;
        t.completed = false;
        t.failure_reason = e.what();
        return t;
    }
}

// within 5% relative slack plus an absolute floor for values near zero
bool non_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1] * kTrendSlack + kAbsFloor) return false;
    return true;
}

// quadratic pairs on a lattice spanning the datum range widened by 50% on
// each side, plus smoothed Kruzkov pairs at interior levels
std::vector<EntropyPair> entropy_suite(const Field& u0) {
    double lo = u0.values[0], hi = u0.values[0];
    for (double v : u0.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double span = hi - lo;
    if (span <= 0.0) span = 1.0;
    lo -= 0.5 * span;
    hi += 0.5 * span;
    const double width = hi - lo;

    std::vector<EntropyPair> pairs;
    const std::size_t nq = 11, nk = 5;
    for (std::size_t i = 0; i < nq; ++i)
        pairs.push_back(make_entropy_pair(
            "quadratic", lo + width * static_cast<double>(i) / (nq - 1)));
    for (std::size_t i = 0; i < nk; ++i)
        pairs.push_back(make_entropy_pair(
            "kruzkov_smooth",
            lo + width * static_cast<double>(i + 1) / (nk + 1), 0.1 * span));
    return pairs;
}

double battery_violation(const Trajectory& traj, const std::vector<EntropyPair>& pairs,
                         const TestBattery& battery) {
    double worst = 0.0;
    for (const auto& pair : pairs)
        worst = std::max(worst, -entropy_residual(traj, pair, battery));
    return std::max(0.0, worst);
}

// shared tail of PConvergence: fit, calibration, and gap monotonicity from
// the per-run values already in place
void finish_p_convergence(PConvergence& pc, const std::vector<double>& eps) {
    const bool fittable =
        std::all_of(pc.eps_linf_dxP.begin(), pc.eps_linf_dxP.end(),
                    [](double v) { return v > 0.0; });
    if (fittable && eps.size() >= 2) {
        pc.slope = loglog_slope(eps, pc.eps_linf_dxP);
        pc.slope_ok = pc.slope >= 0.3;
        pc.calibration = pc.eps_linf_dxP.front() / std::sqrt(eps.front());
        pc.bound_ok = true;
        for (std::size_t i = 0; i < eps.size(); ++i)
            if (pc.eps_linf_dxP[i] > 1.1 * pc.calibration * std::sqrt(eps[i]))
                pc.bound_ok = false;
    } else {
        pc.slope = 0.0;
        pc.slope_ok = false;
        pc.calibration = 0.0;
        pc.bound_ok = false;
    }
    pc.gaps_non_increasing =
        non_increasing(pc.p_gap_sup) && non_increasing(pc.dxp_gap_sup);
}

std::string describe_provenance(const SweepConfig& c) {
    const SweepConfig d = default_sweep_config();
    std::vector<std::string> kept;
    auto note = [&](bool same, const char* name) {
        if (same) kept.push_back(name);
    };
    note(c.n_points == d.n_points && c.length == d.length && c.x_left == d.x_left, "grid");
    note(c.ic.amplitude == d.ic.amplitude && c.ic.center == d.ic.center &&
             c.ic.width == d.ic.width,
         "ic");
    note(c.gamma == d.gamma, "gamma");
    note(c.epsilons == d.epsilons, "epsilons");
    note(c.scaling_c == d.scaling_c && c.scaling_p == d.scaling_p, "scaling");
    note(c.t_final == d.t_final && c.dt == d.dt, "time_stepping");
    note(c.snapshot_interval == d.snapshot_interval &&
             c.diagnostics_interval == d.diagnostics_interval,
         "cadence");
    note(c.comparison_times == d.comparison_times, "comparison_times");
    note(c.windows.size() == d.windows.size() &&
             std::equal(c.windows.begin(), c.windows.end(), d.windows.begin(),
                        [](const Window& a, const Window& b) {
                            return a.a == b.a && a.b == b.b;
                        }),
         "windows");
    note(c.p_norms == d.p_norms, "p_norms");
    note(c.reference_refine == d.reference_refine && c.fv_cfl == d.fv_cfl &&
             c.flux == d.flux,
         "reference");
    note(c.battery_nx == d.battery_nx && c.battery_nt == d.battery_nt, "battery");

    std::ostringstream out;
    out << "pulselab sweep v1; beta = " << c.scaling_c << " * eps^" << c.scaling_p
        << "; reference " << flux_name(c.flux) << " at " << c.reference_refine
        << "x, cfl " << c.fv_cfl << "; built-in defaults kept: ";
    if (kept.empty()) {
        out << "none";
    } else {
        for (std::size_t i = 0; i < kept.size(); ++i)
            out << (i ? ", " : "") << kept[i];
    }
    return out.str();
}

} // namespace

SweepConfig default_sweep_config() { return SweepConfig{}; }

void validate(const SweepConfig& c, bool for_sweep) {
    ensure(c.n_points >= 8, "n_points must be at least 8");
    ensure(std::isfinite(c.length) && c.length > 0.0, "length must be positive");
    ensure(std::isfinite(c.x_left), "x_left must be finite");
    ensure(std::isfinite(c.ic.amplitude), "ic.amplitude must be finite");
    ensure(std::isfinite(c.ic.width) && c.ic.width > 0.0, "ic.width must be positive");
    ensure(std::isfinite(c.gamma) && c.gamma > 0.0, "gamma must be positive");

    ensure(!c.epsilons.empty(), "epsilons must be nonempty");
    if (for_sweep) ensure(c.epsilons.size() >= 3, "a sweep needs at least 3 epsilons");
    for (std::size_t i = 0; i < c.epsilons.size(); ++i) {
        ensure(std::isfinite(c.epsilons[i]) && c.epsilons[i] > 0.0 && c.epsilons[i] < 1.0,
               "epsilons must lie in (0, 1)");
        if (i > 0)
            ensure(c.epsilons[i] < c.epsilons[i - 1], "epsilons must be strictly decreasing");
    }
    ensure(std::isfinite(c.scaling_c) && c.scaling_c > 0.0, "scaling.c must be positive");
    ensure(std::isfinite(c.scaling_p) && c.scaling_p >= 2.0,
           "scaling.p must be at least 2 (the two regimes are p = 2 and p > 2)");

    ensure(std::isfinite(c.t_final) && c.t_final > 0.0, "t_final must be positive");
    ensure(std::isfinite(c.dt) && c.dt > 0.0, "dt must be positive");
    ensure(c.snapshot_interval > 0.0, "snapshot_interval must be positive");
    ensure(c.diagnostics_interval > 0.0, "diagnostics_interval must be positive");

    ensure(!c.comparison_times.empty(), "comparison_times must be nonempty");
    for (double t : c.comparison_times)
        ensure(std::isfinite(t) && t > 0.0 && t <= c.t_final * (1.0 + 1e-12),
               "comparison_times must lie in (0, t_final]");

    ensure(!c.windows.empty(), "windows must be nonempty");
    for (const auto& w : c.windows)
        ensure(std::isfinite(w.a) && std::isfinite(w.b) && w.a < w.b,
               "each window needs a < b");

    ensure(!c.p_norms.empty(), "p_norms must be nonempty");
    for (double p : c.p_norms)
        ensure(std::isfinite(p) && p >= 1.0 && p < 6.0, "p_norms must lie in [1, 6)");

    ensure(c.reference_refine >= 2, "reference_refine must be at least 2");
    ensure(std::isfinite(c.fv_cfl) && c.fv_cfl > 0.0 && c.fv_cfl < 1.0,
           "fv_cfl must lie in (0, 1)");
    ensure(c.battery_nx >= 1 && c.battery_nt >= 1, "battery needs at least 1x1 bumps");
}

Trajectory run_reference(const SweepConfig& c, std::size_t refine_override) {
    validate(c, false);
    const std::size_t refine = refine_override ? refine_override : c.reference_refine;
    ensure(refine >= 1, "reference refinement must be at least 1");
    const Grid1D g = make_grid(c.n_points * refine, c.length, c.x_left);
    FVParams p;
    p.gamma = c.gamma;
    p.cfl = c.fv_cfl;
    p.flux = c.flux;
    p.t_final = c.t_final;
    p.snapshot_interval = c.snapshot_interval;
    p.diagnostics_interval = c.diagnostics_interval;
    p.forced_times = c.comparison_times;
    return fv_integrate(datum(c, g), p);
}

SweepOutput run_sweep(const SweepConfig& c, int jobs) {
    validate(c, true);
    const std::size_t n = c.epsilons.size();

    SweepOutput out;
    out.reference = run_reference(c);
    out.reference_doubled = run_reference(c, 2 * c.reference_refine);

    out.runs.resize(n);
    const std::size_t workers =
        std::min<std::size_t>(std::max(jobs, 1), n);
    std::atomic<std::size_t> cursor{0};
    auto drain = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= n) return;
            out.runs[i] = dispersive_run(c, c.epsilons[i]);
        }
    };
    if (workers <= 1) {
        drain();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(drain);
        for (auto& th : pool) th.join();
    }

    out.report = assemble_report(c, out.runs, out.reference, out.reference_doubled);
    return out;
}

ConvergenceReport assemble_report(const SweepConfig& c, const std::vector<Trajectory>& runs,
                                  const Trajectory& reference,
                                  const Trajectory& reference_doubled) {
    validate(c, true);
    ensure(runs.size() == c.epsilons.size(),
           "assemble_report: one trajectory per epsilon required");
    const std::size_t n = runs.size();

    ConvergenceReport rep;
    rep.config = c;
    rep.provenance = describe_provenance(c);

    const Grid1D g = make_grid(c.n_points, c.length, c.x_left);
    const std::vector<EntropyPair> pairs = entropy_suite(datum(c, g));
    const TestBattery battery =
        make_battery(c.windows.front().a, c.windows.front().b, 0.1 * c.t_final,
                     0.9 * c.t_final, c.battery_nx, c.battery_nt);

    double doubling_change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Trajectory& tr = runs[i];
        RunResult run;
        run.epsilon = c.epsilons[i];
        run.beta = c.scaling_c * std::pow(c.epsilons[i], c.scaling_p);
        run.completed = tr.completed;
        run.failure_reason = tr.failure_reason;
        if (tr.completed) {
            for (double t : c.comparison_times)
                for (const auto& w : c.windows)
                    for (double p : c.p_norms) {
                        DistanceEntry d;
                        d.time = t;
                        d.window = w;
                        d.p = p;
                        d.value = compare_at(tr, reference, t, p, w.a, w.b, kTimeTol);
                        run.distances.push_back(d);
                        const double alt =
                            compare_at(tr, reference_doubled, t, p, w.a, w.b, kTimeTol);
                        const double scale = std::max({d.value, alt, 1e-300});
                        doubling_change =
                            std::max(doubling_change, std::fabs(alt - d.value) / scale);
                    }
            run.entropy_violation = battery_violation(tr, pairs, battery);
            for (const auto& r : tr.records)
                run.sup_linf_P = std::max(run.sup_linf_P, r.linf_P);
            for (std::size_t s = 0; s < tr.snapshots.size(); ++s) {
                const Field dxP =
                    derivative(solve_p_regularized(tr.snapshot(s), run.epsilon).p, 1);
                run.sup_linf_dxP = std::max(
                    run.sup_linf_dxP, lp_norm(dxP, std::numeric_limits<double>::infinity()));
            }
        }
        rep.runs.push_back(std::move(run));
    }
    rep.reference_doubling_max_change = doubling_change;

    std::vector<const Trajectory*> done;
    std::vector<std::size_t> done_idx;
    for (std::size_t i = 0; i < n; ++i)
        if (runs[i].completed) {
            done.push_back(&runs[i]);
            done_idx.push_back(i);
        }

    // trends over completed runs, one per (time, window, norm) triple
    std::size_t slot = 0;
    for (double t : c.comparison_times)
        for (const auto& w : c.windows)
            for (double p : c.p_norms) {
                MetricTrend trend;
                trend.time = t;
                trend.window = w;
                trend.p = p;
                for (std::size_t i : done_idx)
                    trend.values.push_back(rep.runs[i].distances[slot].value);
                trend.non_increasing = non_increasing(trend.values);
                trend.halved = trend.values.size() >= 2 &&
                               trend.values.back() <= 0.5 * trend.values.front();
                rep.trends.push_back(std::move(trend));
                ++slot;
            }

    rep.verdicts.all_completed = done_idx.size() == n;
    rep.verdicts.distances_non_increasing = true;
    rep.verdicts.final_half_of_first = true;
    for (const auto& trend : rep.trends) {
        rep.verdicts.distances_non_increasing &= trend.non_increasing;
        rep.verdicts.final_half_of_first &= trend.halved;
    }
    rep.verdicts.reference_converged = doubling_change <= 0.10 * (1.0 + 1e-12);

    if (done.size() >= 3) {
        std::vector<Trajectory> completed;
        completed.reserve(done.size());
        for (const Trajectory* tr : done) completed.push_back(*tr);
        rep.scaling = scaling_suite(completed);
        for (std::size_t k = 0; k < done_idx.size(); ++k)
            rep.runs[done_idx[k]].scaling = rep.scaling.runs[k];
    }

    rep.verdicts.entropy_trend_ok = true;
    if (c.scaling_p > 2.0) {
        std::vector<double> viol;
        for (std::size_t i : done_idx) viol.push_back(rep.runs[i].entropy_violation);
        rep.verdicts.entropy_trend_ok = non_increasing(viol);
    }

    PConvergence& pc = rep.p_convergence;
    std::vector<double> eps_done;
    for (std::size_t i : done_idx) {
        eps_done.push_back(rep.runs[i].epsilon);
        pc.eps_linf_dxP.push_back(rep.runs[i].epsilon * rep.runs[i].sup_linf_dxP);
    }
    // sup-norm gaps of P and P_x between consecutive completed runs at the
    // comparison times; the runs share one grid, so this is node-wise
    for (std::size_t k = 0; k + 1 < done_idx.size(); ++k) {
        const Trajectory& a = *done[k];
        const Trajectory& b = *done[k + 1];
        double pg = 0.0, dg = 0.0;
        for (double t : c.comparison_times) {
            const std::size_t ia = a.nearest_snapshot(t, kTimeTol);
            const std::size_t ib = b.nearest_snapshot(t, kTimeTol);
            const Field pa = solve_p_regularized(a.snapshot(ia), a.meta.epsilon).p;
            const Field pb = solve_p_regularized(b.snapshot(ib), b.meta.epsilon).p;
            const Field dpa = derivative(pa, 1);
            const Field dpb = derivative(pb, 1);
            for (std::size_t j = 0; j < pa.values.size(); ++j) {
                pg = std::max(pg, std::fabs(pa.values[j] - pb.values[j]));
                dg = std::max(dg, std::fabs(dpa.values[j] - dpb.values[j]));
            }
        }
        pc.p_gap_sup.push_back(pg);
        pc.dxp_gap_sup.push_back(dg);
    }
    finish_p_convergence(pc, eps_done);

    return rep;
}

PConvergence check_p_convergence(const ConvergenceReport& report) {
    PConvergence pc;
    std::vector<double> eps_done;
    for (const auto& run : report.runs)
        if (run.completed) {
            eps_done.push_back(run.epsilon);
            pc.eps_linf_dxP.push_back(run.epsilon * run.sup_linf_dxP);
        }
    pc.p_gap_sup = report.p_convergence.p_gap_sup;
    pc.dxp_gap_sup = report.p_convergence.dxp_gap_sup;
    finish_p_convergence(pc, eps_done);
    return pc;
}

} // namespace pulselab
