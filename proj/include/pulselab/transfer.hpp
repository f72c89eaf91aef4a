// Cross-grid comparison: conservative restriction and windowed distances.
#pragma once

#include "pulselab/field.hpp"
#include "pulselab/trajectory.hpp"

namespace pulselab {

// Cell-average a field onto a coarser grid covering the same span. The
// fine grid must refine the coarse one by an integer factor.
Field restrict_conservative(const Field& fine, const Grid1D& coarse);

// ||a - b||_{L^p([xa, xb])} on a common grid (the coarser of the two after
// restriction). Throws on non-commensurate grids.
double lp_distance(const Field& a, const Field& b, double p, double xa, double xb);

// Distance between trajectory states at time t (nearest snapshots within tol).
double compare_at(const Trajectory& a, const Trajectory& b, double t, double p,
                  double xa, double xb, double time_tol);

} // namespace pulselab
