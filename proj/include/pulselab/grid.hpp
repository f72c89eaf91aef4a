// Uniform periodic 1-D grid.
#pragma once

#include <cstddef>
#include <vector>

namespace pulselab {

struct Grid1D {
    std::size_t n = 0;   // number of nodes
    double length = 0.0; // period
    double x_left = 0.0; // coordinate of node 0
    double dx = 0.0;     // length / n

    double node(std::size_t j) const { return x_left + dx * static_cast<double>(j); }
    std::vector<double> nodes() const;

    bool operator==(const Grid1D&) const = default;
};

// Throws std::invalid_argument unless n_points >= 8 and length > 0.
Grid1D make_grid(std::size_t n_points, double length, double x_left = 0.0);

} // namespace pulselab
