#include "pulselab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "pulselab/errors.hpp"
#include "pulselab/trajectory.hpp"

namespace pulselab {

namespace {

struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double v) {
        const double y = v - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

double dot(const Field& a, const Field& b) {
    KahanSum acc;
    for (std::size_t j = 0; j < a.grid.n; ++j) acc.add(a.values[j] * b.values[j]);
    return acc.s * a.grid.dx;
}

DiagnosticsRecord base_record(const Field& u, const Field& P, double eps, double beta,
                              double gamma, double t) {
    detail::require_same_grid(u, P, "record");
    detail::ensure(std::isfinite(t), "record: time must be finite");
    detail::ensure(eps >= 0.0 && beta >= 0.0 && gamma > 0.0, "record: bad parameters");
    const double inf = std::numeric_limits<double>::infinity();

    DiagnosticsRecord r;
    r.t = t;
    r.l2_u = lp_norm(u, 2.0);
    r.l6_u = lp_norm(u, 6.0);
    r.linf_u = lp_norm(u, inf);
    r.mean_u = mean(u);
    r.mean_P = mean(P);
    r.linf_P = lp_norm(P, inf);
    r.l2_P = lp_norm(P, 2.0);

    Field Px = derivative(P, 1);
    Field Pxx = derivative(P, 2);
    r.l2_dxP = lp_norm(Px, 2.0);
    r.l2_dxxP = lp_norm(Pxx, 2.0);

    Field ux = derivative(u, 1);
    Field uxx = derivative(u, 2);
    r.l2_dxu = lp_norm(ux, 2.0);
    r.l2_dxxu = lp_norm(uxx, 2.0);
    KahanSum mixed;
    for (std::size_t j = 0; j < u.grid.n; ++j)
        mixed.add(std::fabs(ux.values[j] * uxx.values[j]));
    r.l1_dxu_dxxu = mixed.s * u.grid.dx;

    const double int_u4 = std::pow(lp_norm(u, 4.0), 4);
    r.G1 = beta * r.l2_dxu * r.l2_dxu - int_u4 / 12.0 + gamma * r.l2_P * r.l2_P +
           eps * eps * gamma * r.l2_dxP * r.l2_dxP;
    r.G2 = std::pow(r.l6_u, 6) / 6.0 + 1.5 * eps * eps * r.l2_dxu * r.l2_dxu;

    const double nu2 = r.l2_u * r.l2_u;
    const double floor2 = std::max(nu2, 1e-300);
    r.p_identity_residual =
        (eps * eps * r.l2_dxxP * r.l2_dxxP + r.l2_dxP * r.l2_dxP - nu2) / floor2;
    r.up_identity_residual = (dot(u, P) - eps * r.l2_dxP * r.l2_dxP) / floor2;

    r.F_right_edge = second_primitive(project_zero_mean(P)).values.back();
    return r;
}

} // namespace

const char* const kDiagnosticsSchema = "pulselab-diagnostics-v1";

std::vector<std::string> diagnostics_columns() {
    return {"t",      "l2_u",   "l6_u",   "linf_u",        "mean_u",
            "mean_P", "linf_P", "l2_P",   "l2_dxP",        "l2_dxxP",
            "l2_dxu", "l2_dxxu", "l1_dxu_dxxu", "G1",      "G2",
            "energy_margin", "p_identity_residual", "up_identity_residual",
            "F_right_edge"};
}

std::vector<double> diagnostics_row(const DiagnosticsRecord& r) {
    return {r.t,      r.l2_u,   r.l6_u,   r.linf_u,        r.mean_u,
            r.mean_P, r.linf_P, r.l2_P,   r.l2_dxP,        r.l2_dxxP,
            r.l2_dxu, r.l2_dxxu, r.l1_dxu_dxxu, r.G1,      r.G2,
            r.energy_margin, r.p_identity_residual, r.up_identity_residual,
            r.F_right_edge};
}

DiagnosticsAccumulator::DiagnosticsAccumulator(double epsilon, double beta, double gamma,
                                               const Field& u0)
    : eps_(epsilon), beta_(beta), gamma_(gamma) {
    detail::ensure(epsilon >= 0.0 && beta >= 0.0 && gamma > 0.0,
                   "DiagnosticsAccumulator: bad parameters");
    const double n = lp_norm(u0, 2.0);
    c0_ = n * n;
}

DiagnosticsRecord DiagnosticsAccumulator::record(const Field& u, const Field& P, double t) {
    DiagnosticsRecord r = base_record(u, P, eps_, beta_, gamma_, t);
    const double g = r.l2_dxu * r.l2_dxu;
    if (first_) {
        first_ = false;
    } else {
        detail::ensure(t >= last_t_, "record: time must not decrease");
        integral_ += 0.5 * (t - last_t_) *
                     (std::exp(-2.0 * gamma_ * last_t_) * last_g_ +
                      std::exp(-2.0 * gamma_ * t) * g);
    }
    last_t_ = t;
    last_g_ = g;
    r.energy_margin =
        std::exp(2.0 * gamma_ * t) * (c0_ - 2.0 * eps_ * integral_) - r.l2_u * r.l2_u;
    return r;
}

DiagnosticsRecord record(const Field& u, const Field& P, double epsilon, double beta,
                         double gamma, double t) {
    DiagnosticsAccumulator acc(epsilon, beta, gamma, u);
    return acc.record(u, P, t);
}

ScalingReport scaling_suite(const std::vector<Trajectory>& runs) {
    detail::ensure(runs.size() >= 3, "scaling_suite: need at least three runs");
    std::set<double> betas;
    ScalingReport rep;
    std::vector<double> bx, uy;
    double coarsest_eps = -1.0;
    for (const auto& tr : runs) {
        detail::ensure(tr.completed, "scaling_suite: all runs must be completed");
        detail::ensure(tr.meta.kind == SolverKind::dispersive,
                       "scaling_suite: runs must come from the dispersive solver");
        detail::ensure(tr.records.size() >= 2, "scaling_suite: runs need diagnostics records");
        detail::ensure(tr.meta.epsilon > 0.0 && tr.meta.beta > 0.0,
                       "scaling_suite: positive epsilon and beta required");
        betas.insert(tr.meta.beta);

        ScalingRun sr;
        sr.epsilon = tr.meta.epsilon;
        sr.beta = tr.meta.beta;
        double int_l1 = 0.0, int_dxx2 = 0.0;
        for (std::size_t i = 0; i < tr.records.size(); ++i) {
            const auto& r = tr.records[i];
            sr.sup_linf_u = std::max(sr.sup_linf_u, r.linf_u);
            sr.sup_linf_P = std::max(sr.sup_linf_P, r.linf_P);
            sr.sup_l6_u = std::max(sr.sup_l6_u, r.l6_u);
            sr.sup_eps_l2_dxu = std::max(sr.sup_eps_l2_dxu, tr.meta.epsilon * r.l2_dxu);
            if (i > 0) {
                const auto& q = tr.records[i - 1];
                const double h = r.t - q.t;
                int_l1 += 0.5 * h * (r.l1_dxu_dxxu + q.l1_dxu_dxxu);
                int_dxx2 += 0.5 * h * (r.l2_dxxu * r.l2_dxxu + q.l2_dxxu * q.l2_dxxu);
            }
        }
        sr.int_beta_l1_dxu_dxxu = tr.meta.beta * int_l1;
        sr.int_beta2_l2_dxxu_over_eps =
            tr.meta.beta * tr.meta.beta / tr.meta.epsilon * int_dxx2;
        rep.runs.push_back(sr);
        bx.push_back(sr.beta);
        uy.push_back(sr.sup_linf_u);
        if (tr.meta.epsilon > coarsest_eps) {
            coarsest_eps = tr.meta.epsilon;
            rep.sup_linf_P_coarsest = sr.sup_linf_P;
        }
    }
    detail::ensure(betas.size() == runs.size(), "scaling_suite: betas must be distinct");
    rep.slope_linf_u_vs_beta = loglog_slope(bx, uy);
    rep.linf_P_bounded = true;
    for (const auto& sr : rep.runs)
        if (sr.sup_linf_P > 2.0 * rep.sup_linf_P_coarsest) rep.linf_P_bounded = false;
    return rep;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    detail::ensure(x.size() == y.size() && x.size() >= 2, "loglog_slope: need >= 2 points");
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        detail::ensure(x[i] > 0.0 && y[i] > 0.0, "loglog_slope: values must be positive");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double d = n * sxx - sx * sx;
    detail::ensure(std::fabs(d) > 0.0, "loglog_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / d;
}

} // namespace pulselab
