#include "pulselab/fv.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "events.hpp"
#include "pulselab/diagnostics.hpp"
#include "pulselab/errors.hpp"
#include "pulselab/nonlocal.hpp"

namespace pulselab {

namespace {

void reject_if_bad(const std::vector<double>& v, const char* when) {
    for (double x : v)
        if (!std::isfinite(x)) throw StepRejected(std::string("fv step: ") + when);
}

double cfl_bound(const Field& u, double cfl) {
    return cfl * u.grid.dx / std::max(1.0, max_wave_speed(u));
}

Field step_impl(const Field& u, const FVParams& p, double dt) {
    reject_if_bad(u.values, "non-finite state");
    const double bound = cfl_bound(u, p.cfl);
    if (!(dt <= bound * (1.0 + 1e-12)))
        throw StepRejected("fv step: dt " + std::to_string(dt) + " exceeds CFL bound " +
                           std::to_string(bound));
    const std::size_t n = u.grid.n;
    std::vector<double> F(n); // F[j] is the flux through the j+1/2 interface
    for (std::size_t j = 0; j < n; ++j) {
        const double ul = u.values[j], ur = u.values[(j + 1) % n];
        F[j] = p.flux == FluxKind::godunov ? godunov_flux(ul, ur) : rusanov_flux(ul, ur);
    }
    Field out = u;
    const double lam = dt / u.grid.dx;
    if (p.source_enabled) {
        Field P = primitive(u).p;
        for (std::size_t j = 0; j < n; ++j)
            out.values[j] = u.values[j] - lam * (F[j] - F[(j + n - 1) % n]) +
                            dt * p.gamma * P.values[j];
    } else {
        for (std::size_t j = 0; j < n; ++j)
            out.values[j] = u.values[j] - lam * (F[j] - F[(j + n - 1) % n]);
    }
    reject_if_bad(out.values, "non-finite update");
    return out;
}

} // namespace

void validate(const FVParams& p) {
    detail::ensure(std::isfinite(p.gamma) && p.gamma > 0.0,
                   "fv params: gamma must be positive");
    detail::ensure(std::isfinite(p.cfl) && p.cfl > 0.0 && p.cfl < 1.0,
                   "fv params: cfl must lie in (0, 1)");
    detail::ensure(std::isfinite(p.t_final) && p.t_final > 0.0,
                   "fv params: t_final must be positive");
    detail::ensure(std::isfinite(p.snapshot_interval) && p.snapshot_interval > 0.0,
                   "fv params: snapshot_interval must be positive");
    detail::ensure(std::isfinite(p.diagnostics_interval) && p.diagnostics_interval > 0.0,
                   "fv params: diagnostics_interval must be positive");
    for (double t : p.forced_times)
        detail::ensure(std::isfinite(t) && t >= 0.0 && t <= p.t_final,
                       "fv params: forced times must lie in [0, t_final]");
}

double flux(double u) { return -u * u * u / 6.0; }

double godunov_flux(double /*ul*/, double ur) {
    // f is monotone decreasing: both orderings of the Riemann problem pick f(ur)
    return flux(ur);
}

double rusanov_flux(double ul, double ur) {
    const double alpha = 0.5 * std::max(ul * ul, ur * ur);
    return 0.5 * (flux(ul) + flux(ur)) - 0.5 * alpha * (ur - ul);
}

double max_wave_speed(const Field& u) {
    double m = 0.0;
    for (double v : u.values) m = std::max(m, 0.5 * v * v);
    return m;
}

Field fv_step(const Field& u, const FVParams& p, double dt) {
    validate(p);
    detail::ensure(std::isfinite(dt) && dt > 0.0, "fv_step: dt must be positive");
    return step_impl(u, p, dt);
}

Trajectory fv_integrate(const Field& u0, const FVParams& p) {
    validate(p);
    detail::require_finite(u0.values, "fv_integrate");
    Trajectory tr;
    tr.grid = u0.grid;
    tr.meta.kind = SolverKind::finite_volume;
    tr.meta.epsilon = 0.0;
    tr.meta.beta = 0.0;
    tr.meta.gamma = p.gamma;
    tr.meta.cfl = p.cfl;
    tr.meta.flux = flux_name(p.flux);

    DiagnosticsAccumulator acc(0.0, 0.0, p.gamma, u0);
    auto events = detail::build_events(p.t_final, p.snapshot_interval,
                                       p.diagnostics_interval, p.forced_times);
    const double tol = detail::event_tol(p.t_final);

    Field u = u0;
    double t = 0.0;
    try {
        for (const auto& e : events) {
            while (t < e.t - tol) {
                const double dt_max = cfl_bound(u, p.cfl);
                const double remaining = e.t - t;
                const double dt_eff = std::min(dt_max, remaining);
                u = step_impl(u, p, dt_eff);
                t = (remaining <= dt_max * (1.0 + 1e-12)) ? e.t : t + dt_eff;
            }
            if (e.snap) {
                tr.times.push_back(e.t);
                tr.snapshots.push_back(u.values);
            }
            if (e.diag) {
                Field P = primitive(u).p;
                tr.records.push_back(acc.record(u, P, e.t));
            }
        }
        tr.completed = true;
    } catch (const StepRejected& ex) {
        tr.completed = false;
        tr.failure_reason = ex.what();
    }
    return tr;
}

double total_variation(const Field& u) {
    double tv = 0.0;
    const std::size_t n = u.grid.n;
    for (std::size_t j = 0; j < n; ++j)
        tv += std::fabs(u.values[(j + 1) % n] - u.values[j]);
    return tv;
}

std::string flux_name(FluxKind k) {
    return k == FluxKind::godunov ? "godunov" : "rusanov";
}

FluxKind flux_kind(const std::string& name) {
    if (name == "godunov") return FluxKind::godunov;
    if (name == "rusanov") return FluxKind::rusanov;
    throw std::invalid_argument("flux_kind: unknown flux '" + name + "'");
}

} // namespace pulselab
