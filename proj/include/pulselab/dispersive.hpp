// Pseudospectral solver for u_t = (1/6)(u^3)_x + beta u_xxx + eps u_xx + gamma P,
// -eps P_xx + P_x = u. Fourth-order integrating-factor RK; the linear symbol
// is applied exactly per mode.
#pragma once

#include <complex>
#include <vector>

#include "pulselab/errors.hpp"
#include "pulselab/trajectory.hpp"

namespace pulselab {

struct DispersiveParams {
    double epsilon = 0.1;  // in (0, 1)
    double beta = 0.01;    // in (0, 1)
    double gamma = 0.5;    // > 0
    double dt = 2e-3;
    double t_final = 2.0;
    double snapshot_interval = 0.05;
    double diagnostics_interval = 0.01;
    std::vector<double> forced_times; // step boundaries to land on exactly
    bool linear_only = false;         // test hook: drop the cubic flux and the source
};

void validate(const DispersiveParams& p);

// lambda(k) = -eps k^2 - i beta k^3.
std::complex<double> linear_symbol(double k, double epsilon, double beta);

// (1/6) d_x(cubic(u)) + gamma * solve_p_regularized(u, eps).p
Field nonlinear_rhs(const Field& u, const DispersiveParams& p);

// One IFRK4 step. Throws StepRejected when the advective guard
// dt <= 0.5 * spacing / max(1, max u^2/2) fails or values go non-finite.
// The zero mode is pinned to zero after the update.
Field step(const Field& u, const DispersiveParams& p, double dt);

// Fixed-dt integration with snapshot and diagnostics cadences. On
// StepRejected the partial trajectory is returned with completed = false.
Trajectory integrate(const Field& u0, const DispersiveParams& p);

// Manufactured solution u*(t,x) = cos(t) * ricker(x); the forcing that makes
// u* exact is added to the right-hand side.
struct ManufacturedSpec {
    double amplitude = 1.0;
    double center = 0.0;
    double width = 1.0;
};

struct MmsErrorSample {
    double t = 0.0;
    double sup_error = 0.0;
    double l2_error = 0.0;
};

struct MmsResult {
    Trajectory traj;
    std::vector<MmsErrorSample> errors; // at the diagnostics cadence
    double final_sup_error = 0.0;
    double final_l2_error = 0.0;
};

MmsResult integrate_manufactured(const Grid1D& g, const DispersiveParams& p,
                                 const ManufacturedSpec& exact);

} // namespace pulselab
