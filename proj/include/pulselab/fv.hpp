// Monotone finite-volume solver for the limit equation
// u_t + (-u^3/6)_x = gamma P, P = primitive(u).
#pragma once

#include <string>

#include "pulselab/trajectory.hpp"

namespace pulselab {

enum class FluxKind { godunov, rusanov };

struct FVParams {
    double gamma = 0.5;   // > 0
    double cfl = 0.45;    // in (0, 1)
    FluxKind flux = FluxKind::godunov;
    double t_final = 2.0;
    double snapshot_interval = 0.05;
    double diagnostics_interval = 0.01;
    std::vector<double> forced_times;
    bool source_enabled = true; // test hook: drop gamma P
};

void validate(const FVParams& p);

double flux(double u); // -u^3/6

// Exact Riemann (Godunov) flux; f is monotone decreasing, so this is f(ur).
double godunov_flux(double ul, double ur);
// Central flux with local Lax-Friedrichs dissipation, alpha = max(ul^2, ur^2)/2.
double rusanov_flux(double ul, double ur);

double max_wave_speed(const Field& u); // max |f'(u_j)| = max u_j^2/2

// One explicit conservative update with unsplit source. dt must satisfy the
// CFL condition for the current state.
Field fv_step(const Field& u, const FVParams& p, double dt);

Trajectory fv_integrate(const Field& u0, const FVParams& p);

double total_variation(const Field& u); // periodic

std::string flux_name(FluxKind k);
FluxKind flux_kind(const std::string& name);

} // namespace pulselab
