#include "pulselab/transfer.hpp"

#include <cmath>
#include <cstddef>

#include "pulselab/errors.hpp"

namespace pulselab {

namespace {

bool same_span(const Grid1D& a, const Grid1D& b) {
    const double scale = std::max(1.0, std::fabs(a.length));
    return std::fabs(a.length - b.length) <= 1e-12 * scale &&
           std::fabs(a.x_left - b.x_left) <= 1e-12 * scale;
}

} // namespace

Field restrict_conservative(const Field& fine, const Grid1D& coarse) {
    detail::ensure(fine.values.size() == fine.grid.n, "restrict: malformed field");
    detail::ensure(same_span(fine.grid, coarse),
                   "restrict: grids must cover the same span");
    detail::ensure(fine.grid.n % coarse.n == 0 && fine.grid.n >= coarse.n,
                   "restrict: fine grid must refine the coarse one by an integer factor");
    const std::size_t m = fine.grid.n / coarse.n;
    if (m == 1) return Field{coarse, fine.values};

    const std::size_t nf = fine.grid.n;
    Field out{coarse, std::vector<double>(coarse.n, 0.0)};
    // cell-centered overlap weights: for even m the two outermost fine cells
    // straddle the coarse cell edge and contribute half each
    for (std::size_t j = 0; j < coarse.n; ++j) {
        const std::ptrdiff_t c = static_cast<std::ptrdiff_t>(m * j);
        double acc = 0.0;
        if (m % 2 == 1) {
            const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(m / 2);
            for (std::ptrdiff_t o = -half; o <= half; ++o)
                acc += fine.values[std::size_t((c + o + nf) % nf)];
        } else {
            const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(m / 2);
            acc += 0.5 * fine.values[std::size_t((c - half + nf) % nf)];
            acc += 0.5 * fine.values[std::size_t((c + half + nf) % nf)];
            for (std::ptrdiff_t o = -half + 1; o <= half - 1; ++o)
                acc += fine.values[std::size_t((c + o + nf) % nf)];
        }
        out.values[j] = acc / double(m);
    }
    return out;
}

double lp_distance(const Field& a, const Field& b, double p, double xa, double xb) {
    if (a.grid.n == b.grid.n) {
        detail::ensure(same_span(a.grid, b.grid), "lp_distance: grids must cover the same span");
        Field diff = a;
        for (std::size_t j = 0; j < a.grid.n; ++j) diff.values[j] -= b.values[j];
        return lp_norm_local(diff, p, xa, xb);
    }
    if (a.grid.n > b.grid.n) return lp_distance(restrict_conservative(a, b.grid), b, p, xa, xb);
    return lp_distance(a, restrict_conservative(b, a.grid), p, xa, xb);
}

double compare_at(const Trajectory& a, const Trajectory& b, double t, double p, double xa,
                  double xb, double time_tol) {
    const std::size_t i = a.nearest_snapshot(t, time_tol);
    const std::size_t j = b.nearest_snapshot(t, time_tol);
    return lp_distance(a.snapshot(i), b.snapshot(j), p, xa, xb);
}

} // namespace pulselab
