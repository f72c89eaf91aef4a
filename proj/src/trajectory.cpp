#include "pulselab/trajectory.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "pulselab/errors.hpp"
#include "pulselab/nonlocal.hpp"

namespace pulselab {

std::size_t Trajectory::nearest_snapshot(double t, double tol) const {
    detail::ensure(!times.empty(), "nearest_snapshot: trajectory has no snapshots");
    detail::ensure(std::isfinite(t) && std::isfinite(tol) && tol >= 0.0,
                   "nearest_snapshot: bad query");
    std::size_t best = 0;
    double gap = std::fabs(times[0] - t);
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double d = std::fabs(times[i] - t);
        if (d < gap) {
            gap = d;
            best = i;
        }
    }
    detail::ensure(gap <= tol, "nearest_snapshot: no snapshot within tolerance of requested time");
    return best;
}

Field Trajectory::p_of_snapshot(std::size_t i) const {
    Field u = snapshot(i);
    if (meta.kind == SolverKind::dispersive)
        return solve_p_regularized(u, meta.epsilon).p;
    return primitive(u).p;
}

} // namespace pulselab
