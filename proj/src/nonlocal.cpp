#include "pulselab/nonlocal.hpp"

#include <cmath>
#include <limits>

#include "pulselab/errors.hpp"

namespace pulselab {

namespace {

void require_mean_zero(const Field& u, const char* who) {
    const double m = mean(u);
    const double sup = lp_norm(u, std::numeric_limits<double>::infinity());
    if (std::fabs(m) > 1e-10 * sup)
        throw NonZeroMean(std::string(who) + ": input mean " + std::to_string(m) +
                          " exceeds 1e-10 * sup norm");
}

std::size_t nearest_node(const Grid1D& g, double x) {
    double j = std::round((x - g.x_left) / g.dx);
    if (j < 0.0) j = 0.0;
    if (j > static_cast<double>(g.n - 1)) j = static_cast<double>(g.n - 1);
    return static_cast<std::size_t>(j);
}

// Divide by the symbol of -eps d_xx + d_x (eps > 0), or of d_x alone
// (eps == 0). Zero mode pinned to zero; the signless Nyquist mode gets no
// first-derivative part, matching the derivative convention.
Field invert_symbol(const Field& u, double eps) {
    auto c = to_spectral(u);
    const std::size_t n = c.grid.n;
    c.modes[0] = 0.0;
    for (std::size_t m = 1; m < n; ++m) {
        const double k = c.wavenumber(m);
        const bool nyquist = (n % 2 == 0 && m == n / 2);
        if (nyquist) {
            if (eps > 0.0)
                c.modes[m] /= eps * k * k;
            else
                c.modes[m] = 0.0;
        } else {
            c.modes[m] /= std::complex<double>(eps * k * k, k);
        }
    }
    return from_spectral(c);
}

NonlocalSolution finish(Field p) {
    NonlocalSolution sol;
    sol.boundary_value = p.values[0];
    sol.mean_p = mean(p);
    const std::size_t j0 = nearest_node(p.grid, 0.0);
    sol.p_at_origin = p.values[j0] - p.values[0]; // left-anchored gauge at x = 0
    sol.p = std::move(p);
    return sol;
}

} // namespace

NonlocalSolution solve_p_regularized(const Field& u, double epsilon) {
    detail::ensure(std::isfinite(epsilon) && epsilon > 0.0,
                   "solve_p_regularized: epsilon must be positive");
    require_mean_zero(u, "solve_p_regularized");
    return finish(invert_symbol(u, epsilon));
}

NonlocalSolution primitive(const Field& u) {
    require_mean_zero(u, "primitive");
    return finish(invert_symbol(u, 0.0));
}

Field second_primitive(const Field& p) {
    require_mean_zero(p, "second_primitive");
    Field F = invert_symbol(p, 0.0);
    const double left = F.values[0];
    for (double& v : F.values) v -= left;
    return F;
}

} // namespace pulselab
