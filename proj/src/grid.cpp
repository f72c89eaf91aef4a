#include "pulselab/grid.hpp"

#include <cmath>

#include "pulselab/errors.hpp"

namespace pulselab {

std::vector<double> Grid1D::nodes() const {
    std::vector<double> xs(n);
    for (std::size_t j = 0; j < n; ++j) xs[j] = node(j);
    return xs;
}

Grid1D make_grid(std::size_t n_points, double length, double x_left) {
    detail::ensure(n_points >= 8, "grid: need at least 8 points");
    detail::ensure(std::isfinite(length) && length > 0.0, "grid: length must be positive");
    detail::ensure(std::isfinite(x_left), "grid: x_left must be finite");
    Grid1D g;
    g.n = n_points;
    g.length = length;
    g.x_left = x_left;
    g.dx = length / static_cast<double>(n_points);
    return g;
}

} // namespace pulselab
