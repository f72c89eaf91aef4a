// Shared result type of both time integrators.
#pragma once

#include <string>
#include <vector>

#include "pulselab/diagnostics.hpp"
#include "pulselab/field.hpp"

namespace pulselab {

enum class SolverKind { dispersive, finite_volume };

struct TrajectoryMeta {
    SolverKind kind = SolverKind::dispersive;
    double epsilon = 0.0; // 0 for the limit-equation solver
    double beta = 0.0;    // 0 for the limit-equation solver
    double gamma = 0.0;
    double dt = 0.0;      // fixed step (dispersive)
    double cfl = 0.0;     // CFL number (finite volume)
    std::string flux;     // "godunov" or "rusanov" (finite volume)
};

struct Trajectory {
    Grid1D grid;
    TrajectoryMeta meta;
    std::vector<double> times;             // snapshot times, increasing
    std::vector<std::vector<double>> snapshots;
    std::vector<DiagnosticsRecord> records;
    bool completed = true;
    std::string failure_reason;

    Field snapshot(std::size_t i) const { return Field{grid, snapshots.at(i)}; }
    // Index of the snapshot nearest t; throws if off by more than tol.
    std::size_t nearest_snapshot(double t, double tol) const;
    // The operative nonlocal term for this trajectory's solver at snapshot i.
    Field p_of_snapshot(std::size_t i) const;
};

} // namespace pulselab
