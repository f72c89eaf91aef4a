#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "pulselab/diagnostics.hpp"
#include "pulselab/errors.hpp"
#include "pulselab/trajectory.hpp"

namespace pulselab {

namespace {

double fprime(double s) { return -0.5 * s * s; }

// adaptive Simpson with absolute tolerance
double simpson(const std::function<double(double)>& f, double a, double b, double fa,
               double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_1d(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

// antiderivative of eta'(s-k) f'(s) over the smoothing window |s-k| < delta,
// for the quartic C^2 smoothing of |s-k|
double smooth_window_antiderivative(double s, double k, double delta) {
    const double a3 = 3.0 / (4.0 * delta), b3 = 1.0 / (4.0 * delta * delta * delta);
    const double s3 = s * s * s, s4 = s3 * s, s5 = s4 * s, s6 = s5 * s;
    return -a3 * (s4 / 4.0 - k * s3 / 3.0) +
           b3 * (s6 / 6.0 - 3.0 * k * s5 / 5.0 + 0.75 * k * k * s4 - k * k * k * s3 / 3.0);
}

// integral of eta'(s-k) f'(s) from k to u for the smoothed kruzkov pair,
// assembled from per-region closed forms
double kruzkov_q(double u, double k, double delta) {
    auto segment = [&](double a, double b) {
        // both endpoints lie in one region by construction
        const double mid = 0.5 * (a + b) - k;
        if (mid > delta) return -(b * b * b - a * a * a) / 6.0;
        if (mid < -delta) return (b * b * b - a * a * a) / 6.0;
        return smooth_window_antiderivative(b, k, delta) -
               smooth_window_antiderivative(a, k, delta);
    };
    const double lo = std::min(u, k), hi = std::max(u, k);
    double cuts[4] = {lo, std::clamp(k - delta, lo, hi), std::clamp(k + delta, lo, hi), hi};
    double acc = 0.0;
    for (int i = 0; i < 3; ++i)
        if (cuts[i + 1] > cuts[i]) acc += segment(cuts[i], cuts[i + 1]);
    return u >= k ? acc : -acc;
}

void check_convex(const std::function<double(double)>& eta, double range, const char* who) {
    detail::ensure(std::isfinite(range) && range > 0.0, "entropy pair: range must be positive");
    const int n = 201;
    const double h = 2.0 * range / (n - 1);
    double prev2 = eta(-range), prev1 = eta(-range + h);
    double scale = std::max(std::fabs(prev2), std::fabs(prev1));
    for (int i = 2; i < n; ++i) {
        const double cur = eta(-range + i * h);
        scale = std::max(scale, std::fabs(cur));
        detail::ensure(prev2 + cur >= 2.0 * prev1 - 1e-10 * (1.0 + scale), who);
        prev2 = prev1;
        prev1 = cur;
    }
}

double psi(double y, double c, double r) {
    const double z = (y - c) / r;
    if (std::fabs(z) >= 1.0) return 0.0;
    const double cc = std::cos(0.5 * M_PI * z);
    return cc * cc / r;
}

double dpsi(double y, double c, double r) {
    const double z = (y - c) / r;
    if (std::fabs(z) >= 1.0) return 0.0;
    return -0.5 * M_PI / (r * r) * std::sin(M_PI * z);
}

} // namespace

EntropyPair make_entropy_pair(const std::string& kind, double k, double delta) {
    detail::ensure(std::isfinite(k), "make_entropy_pair: k must be finite");
    if (kind == "quadratic") {
        EntropyPair p;
        p.name = "quadratic";
        p.eta = [k](double u) { return (u - k) * (u - k); };
        p.eta_prime = [k](double u) { return 2.0 * (u - k); };
        p.q = [k](double u) { return -0.25 * u * u * u * u + k * u * u * u / 3.0; };
        return p;
    }
    if (kind == "kruzkov_smooth") {
        detail::ensure(std::isfinite(delta) && delta > 0.0,
                       "make_entropy_pair: kruzkov_smooth needs delta > 0");
        EntropyPair p;
        p.name = "kruzkov_smooth";
        p.eta = [k, delta](double u) {
            const double s = u - k;
            if (std::fabs(s) >= delta) return std::fabs(s);
            const double s2 = s * s;
            return 3.0 * delta / 8.0 + 3.0 * s2 / (4.0 * delta) -
                   s2 * s2 / (8.0 * delta * delta * delta);
        };
        p.eta_prime = [k, delta](double u) {
            const double s = u - k;
            if (s >= delta) return 1.0;
            if (s <= -delta) return -1.0;
            return 3.0 * s / (2.0 * delta) - s * s * s / (2.0 * delta * delta * delta);
        };
        p.q = [k, delta](double u) { return kruzkov_q(u, k, delta); };
        return p;
    }
    throw std::invalid_argument("make_entropy_pair: unknown kind '" + kind + "'");
}

EntropyPair make_entropy_pair(std::function<double(double)> eta,
                              std::function<double(double)> eta_prime, double range,
                              const std::string& name) {
    detail::ensure(static_cast<bool>(eta) && static_cast<bool>(eta_prime),
                   "make_entropy_pair: callable eta and eta_prime required");
    check_convex(eta, range, "make_entropy_pair: eta is not convex on the given range");
    EntropyPair p;
    p.name = name;
    p.eta = std::move(eta);
    auto ep = std::move(eta_prime);
    p.eta_prime = ep;
    p.q = [ep](double u) {
        auto f = [&ep](double s) { return ep(s) * fprime(s); };
        return integrate_1d(f, 0.0, u, 1e-10);
    };
    return p;
}

TestBattery make_battery(double xa, double xb, double ta, double tb, std::size_t nx,
                         std::size_t nt) {
    detail::ensure(std::isfinite(xa) && std::isfinite(xb) && xb > xa,
                   "make_battery: need xb > xa");
    detail::ensure(std::isfinite(ta) && std::isfinite(tb) && tb > ta,
                   "make_battery: need tb > ta");
    detail::ensure(nx >= 1 && nt >= 1, "make_battery: need at least one bump per axis");
    const double rx = (xb - xa) / double(nx + 1);
    const double rt = (tb - ta) / double(nt + 1);
    TestBattery b;
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            BumpTest bump;
            bump.x_center = xa + double(i + 1) * rx;
            bump.x_radius = rx;
            bump.t_center = ta + double(j + 1) * rt;
            bump.t_radius = rt;
            b.bumps.push_back(bump);
        }
    return b;
}

double entropy_residual(const Trajectory& traj, const EntropyPair& pair,
                        const TestBattery& battery) {
    detail::ensure(!battery.bumps.empty(), "entropy_residual: empty battery");
    detail::ensure(traj.times.size() >= 2, "entropy_residual: need at least two snapshots");
    detail::ensure(traj.times.size() == traj.snapshots.size(),
                   "entropy_residual: trajectory shape mismatch");
    detail::ensure(static_cast<bool>(pair.eta) && static_cast<bool>(pair.eta_prime) &&
                       static_cast<bool>(pair.q),
                   "entropy_residual: incomplete entropy pair");
    for (std::size_t i = 1; i < traj.times.size(); ++i)
        detail::ensure(traj.times[i] > traj.times[i - 1],
                       "entropy_residual: snapshot times must increase");
    const double gamma = traj.meta.gamma;
    detail::ensure(gamma > 0.0, "entropy_residual: trajectory lacks gamma");

    const std::size_t nt = traj.times.size(), nx = traj.grid.n;
    std::vector<std::vector<double>> ev(nt), qv(nt), sv(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        Field u = traj.snapshot(i);
        Field P = traj.p_of_snapshot(i);
        ev[i].resize(nx);
        qv[i].resize(nx);
        sv[i].resize(nx);
        for (std::size_t j = 0; j < nx; ++j) {
            ev[i][j] = pair.eta(u.values[j]);
            qv[i][j] = pair.q(u.values[j]);
            sv[i][j] = pair.eta_prime(u.values[j]) * P.values[j];
        }
    }

    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : battery.bumps) {
        std::vector<double> h(nt, 0.0);
        for (std::size_t i = 0; i < nt; ++i) {
            const double t = traj.times[i];
            const double pt = psi(t, b.t_center, b.t_radius);
            const double dpt = dpsi(t, b.t_center, b.t_radius);
            if (pt == 0.0 && dpt == 0.0) continue;
            double se = 0.0, sq = 0.0, ss = 0.0;
            for (std::size_t j = 0; j < nx; ++j) {
                const double x = traj.grid.node(j);
                const double px = psi(x, b.x_center, b.x_radius);
                const double dpx = dpsi(x, b.x_center, b.x_radius);
                if (px == 0.0 && dpx == 0.0) continue;
                se += ev[i][j] * px;
                sq += qv[i][j] * dpx;
                ss += sv[i][j] * px;
            }
            h[i] = (dpt * se + pt * sq + gamma * pt * ss) * traj.grid.dx;
        }
        double acc = 0.0;
        for (std::size_t i = 1; i < nt; ++i)
            acc += 0.5 * (traj.times[i] - traj.times[i - 1]) * (h[i] + h[i - 1]);
        best = std::min(best, acc);
    }
    return best;
}

} // namespace pulselab
