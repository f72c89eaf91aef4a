#include "pulselab/dispersive.hpp"

#include <algorithm>
#include <cmath>

#include "events.hpp"
#include "pulselab/diagnostics.hpp"
#include "pulselab/nonlocal.hpp"

namespace pulselab {

namespace {

using cvec = std::vector<std::complex<double>>;

bool is_nyquist(std::size_t m, std::size_t n) { return n % 2 == 0 && m == n / 2; }

// time-dependent spectral forcing for the manufactured solution
struct Forcing {
    cvec r_hat;    // exact profile
    cvec flux_hat; // analytic (1/6) d_x(profile^3), sampled then transformed
    cvec lin_hat;  // analytic beta*R''' + eps*R'' plus the discrete gamma*P term
};

// gamma * P with the same mode conventions as solve_p_regularized
void add_source(const SpectralCoeffs& u_hat, double eps, double gamma, cvec& out) {
    const std::size_t n = u_hat.modes.size();
    for (std::size_t m = 1; m < n; ++m) {
        const double k = u_hat.wavenumber(m);
        const std::complex<double> denom =
            is_nyquist(m, n) ? std::complex<double>(eps * k * k, 0.0)
                             : std::complex<double>(eps * k * k, k);
        out[m] += gamma * u_hat.modes[m] / denom;
    }
}

cvec nhat(const Grid1D& g, const cvec& modes, const DispersiveParams& p, const Forcing* f,
          double t) {
    const std::size_t n = modes.size();
    cvec out(n, std::complex<double>(0.0, 0.0));
    if (!p.linear_only) {
        SpectralCoeffs u_hat{g, modes};
        Field u = from_spectral(u_hat);
        SpectralCoeffs flux = derivative(to_spectral(cubic(u)), 1);
        for (std::size_t m = 0; m < n; ++m) out[m] = flux.modes[m] / 6.0;
        add_source(u_hat, p.epsilon, p.gamma, out);
    }
    if (f) {
        const double ct = std::cos(t), st = std::sin(t);
        const double c3 = ct * ct * ct;
        for (std::size_t m = 0; m < n; ++m)
            out[m] += -st * f->r_hat[m] - c3 * f->flux_hat[m] - ct * f->lin_hat[m];
    }
    return out;
}

cvec ifrk4(const Grid1D& g, const cvec& modes, const DispersiveParams& p, double dt,
           const Forcing* f, double t) {
    const std::size_t n = modes.size();
    SpectralCoeffs ref{g, modes};
    cvec E(n), E2(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double k = ref.wavenumber(m);
        std::complex<double> lam(-p.epsilon * k * k,
                                 is_nyquist(m, n) ? 0.0 : -p.beta * k * k * k);
        E[m] = std::exp(dt * lam);
        E2[m] = std::exp(0.5 * dt * lam);
    }
    const cvec n1 = nhat(g, modes, p, f, t);
    cvec a(n);
    for (std::size_t m = 0; m < n; ++m) a[m] = E2[m] * (modes[m] + 0.5 * dt * n1[m]);
    const cvec n2 = nhat(g, a, p, f, t + 0.5 * dt);
    for (std::size_t m = 0; m < n; ++m) a[m] = E2[m] * modes[m] + 0.5 * dt * n2[m];
    const cvec n3 = nhat(g, a, p, f, t + 0.5 * dt);
    for (std::size_t m = 0; m < n; ++m)
        a[m] = E[m] * modes[m] + dt * E2[m] * n3[m];
    const cvec n4 = nhat(g, a, p, f, t + dt);
    cvec out(n);
    for (std::size_t m = 0; m < n; ++m)
        out[m] = E[m] * modes[m] +
                 dt / 6.0 * (E[m] * n1[m] + 2.0 * E2[m] * (n2[m] + n3[m]) + n4[m]);
    out[0] = std::complex<double>(0.0, 0.0);
    return out;
}

double guard_bound(const Field& u) {
    double maxsq = 0.0;
    for (double v : u.values) maxsq = std::max(maxsq, v * v);
    return 0.5 * u.grid.dx / std::max(1.0, 0.5 * maxsq);
}

void reject_if_bad(const Field& u, const char* when) {
    for (double v : u.values)
        if (!std::isfinite(v)) throw StepRejected(std::string("dispersive step: ") + when);
}

Field step_impl(const Field& u, const DispersiveParams& p, double dt, const Forcing* f,
                double t) {
    reject_if_bad(u, "non-finite state");
    const double bound = guard_bound(u);
    if (!(dt <= bound * (1.0 + 1e-12)))
        throw StepRejected("dispersive step: dt " + std::to_string(dt) +
                           " exceeds advective guard " + std::to_string(bound));
    SpectralCoeffs c = to_spectral(u);
    c.modes = ifrk4(u.grid, c.modes, p, dt, f, t);
    Field out = from_spectral(c);
    reject_if_bad(out, "non-finite update");
    return out;
}

using detail::Event;
using detail::build_events;

// shared driver for the plain and manufactured integrations
Trajectory drive(const Field& u0, const DispersiveParams& p, const Forcing* f,
                 MmsResult* mms, const ManufacturedSpec* exact) {
    validate(p);
    detail::require_finite(u0.values, "integrate");
    Trajectory tr;
    tr.grid = u0.grid;
    tr.meta.kind = SolverKind::dispersive;
    tr.meta.epsilon = p.epsilon;
    tr.meta.beta = p.beta;
    tr.meta.gamma = p.gamma;
    tr.meta.dt = p.dt;

    DiagnosticsAccumulator acc(p.epsilon, p.beta, p.gamma, u0);
    auto events = build_events(p.t_final, p.snapshot_interval, p.diagnostics_interval,
                               p.forced_times);
    const double tol = detail::event_tol(p.t_final);

    Field u = u0;
    double t = 0.0;
    auto fire = [&](const Event& e) {
        if (e.snap) {
            tr.times.push_back(e.t);
            tr.snapshots.push_back(u.values);
        }
        if (e.diag) {
            Field P = solve_p_regularized(u, p.epsilon).p;
            tr.records.push_back(acc.record(u, P, e.t));
            if (mms) {
                Field star = sample(u.grid, [&](double x) {
                    const double s = (x - exact->center) / exact->width;
                    return std::cos(e.t) * exact->amplitude * (4.0 * s * s - 2.0) /
                           (exact->width * exact->width) * std::exp(-s * s);
                });
                MmsErrorSample es;
                es.t = e.t;
                double sup = 0.0;
                Field diff = u;
                for (std::size_t j = 0; j < u.grid.n; ++j) {
                    diff.values[j] = u.values[j] - star.values[j];
                    sup = std::max(sup, std::fabs(diff.values[j]));
                }
                es.sup_error = sup;
                es.l2_error = lp_norm(diff, 2.0);
                mms->errors.push_back(es);
            }
        }
    };

    try {
        for (const auto& e : events) {
            while (t < e.t - tol) {
                if (p.dt > guard_bound(u) * (1.0 + 1e-12))
                    throw StepRejected("dispersive step: configured dt " +
                                       std::to_string(p.dt) + " exceeds advective guard " +
                                       std::to_string(guard_bound(u)));
                const double remaining = e.t - t;
                const double dt_eff = std::min(p.dt, remaining);
                u = step_impl(u, p, dt_eff, f, t);
                t = (remaining <= p.dt * (1.0 + 1e-12)) ? e.t : t + dt_eff;
            }
            fire(e);
        }
        tr.completed = true;
    } catch (const StepRejected& ex) {
        tr.completed = false;
        tr.failure_reason = ex.what();
    }
    return tr;
}

} // namespace

void validate(const DispersiveParams& p) {
    detail::ensure(std::isfinite(p.epsilon) && p.epsilon > 0.0 && p.epsilon < 1.0,
                   "dispersive params: epsilon must lie in (0, 1)");
    detail::ensure(std::isfinite(p.beta) && p.beta > 0.0 && p.beta < 1.0,
                   "dispersive params: beta must lie in (0, 1)");
    detail::ensure(std::isfinite(p.gamma) && p.gamma > 0.0,
                   "dispersive params: gamma must be positive");
    detail::ensure(std::isfinite(p.dt) && p.dt > 0.0, "dispersive params: dt must be positive");
    detail::ensure(std::isfinite(p.t_final) && p.t_final > 0.0,
                   "dispersive params: t_final must be positive");
    detail::ensure(std::isfinite(p.snapshot_interval) && p.snapshot_interval > 0.0,
                   "dispersive params: snapshot_interval must be positive");
    detail::ensure(std::isfinite(p.diagnostics_interval) && p.diagnostics_interval > 0.0,
                   "dispersive params: diagnostics_interval must be positive");
    for (double t : p.forced_times)
        detail::ensure(std::isfinite(t) && t >= 0.0 && t <= p.t_final,
                       "dispersive params: forced times must lie in [0, t_final]");
}

std::complex<double> linear_symbol(double k, double epsilon, double beta) {
    return {-epsilon * k * k, -beta * k * k * k};
}

Field nonlinear_rhs(const Field& u, const DispersiveParams& p) {
    SpectralCoeffs u_hat = to_spectral(u);
    SpectralCoeffs flux = derivative(to_spectral(cubic(u)), 1);
    cvec out(u_hat.modes.size());
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = flux.modes[m] / 6.0;
    add_source(u_hat, p.epsilon, p.gamma, out);
    return from_spectral(SpectralCoeffs{u.grid, out});
}

Field step(const Field& u, const DispersiveParams& p, double dt) {
    validate(p);
    detail::ensure(std::isfinite(dt) && dt > 0.0, "step: dt must be positive");
    return step_impl(u, p, dt, nullptr, 0.0);
}

Trajectory integrate(const Field& u0, const DispersiveParams& p) {
    return drive(u0, p, nullptr, nullptr, nullptr);
}

MmsResult integrate_manufactured(const Grid1D& g, const DispersiveParams& p,
                                 const ManufacturedSpec& exact) {
    validate(p);
    detail::ensure(std::isfinite(exact.amplitude) && exact.amplitude != 0.0,
                   "manufactured: amplitude must be nonzero");
    Field R = ricker_ic(g, exact.amplitude, exact.center, exact.width);
    const double w = exact.width, A = exact.amplitude;

    // analytic x-derivatives of the profile via Hermite polynomials
    Field dR = sample(g, [&](double x) {
        const double s = (x - exact.center) / w;
        return -A * (8.0 * s * s * s - 12.0 * s) / (w * w * w) * std::exp(-s * s);
    });
    Field d2R = sample(g, [&](double x) {
        const double s = (x - exact.center) / w, s2 = s * s;
        return A * (16.0 * s2 * s2 - 48.0 * s2 + 12.0) / (w * w * w * w) * std::exp(-s2);
    });
    Field d3R = sample(g, [&](double x) {
        const double s = (x - exact.center) / w, s2 = s * s;
        return -A * (32.0 * s2 * s2 * s - 160.0 * s2 * s + 120.0 * s) /
               (w * w * w * w * w) * std::exp(-s2);
    });

    Forcing f;
    f.r_hat = to_spectral(R).modes;
    Field flux = R;
    for (std::size_t j = 0; j < g.n; ++j)
        flux.values[j] = 0.5 * R.values[j] * R.values[j] * dR.values[j]; // (R^3)'/6
    f.flux_hat = to_spectral(flux).modes;
    Field lin = R;
    for (std::size_t j = 0; j < g.n; ++j)
        lin.values[j] = p.beta * d3R.values[j] + p.epsilon * d2R.values[j];
    f.lin_hat = to_spectral(lin).modes;
    SpectralCoeffs r_sc{g, f.r_hat};
    add_source(r_sc, p.epsilon, p.gamma, f.lin_hat); // discrete gamma * P of the profile

    MmsResult res;
    res.traj = drive(R, p, &f, &res, &exact);
    if (!res.errors.empty()) {
        res.final_sup_error = res.errors.back().sup_error;
        res.final_l2_error = res.errors.back().l2_error;
    }
    return res;
}

} // namespace pulselab
