// Singular-limit experiment: a family of dispersive runs with beta = c*eps^p
// against a finite-volume reference, with verdicts on the convergence trends.
#pragma once

#include <string>
#include <vector>

#include "pulselab/dispersive.hpp"
#include "pulselab/fv.hpp"
#include "pulselab/transfer.hpp"

namespace pulselab {

struct RickerSpec {
    double amplitude = 1.0;
    double center = 0.0;
    double width = 1.0;
};

struct Window {
    double a = 0.0, b = 0.0;
};

struct SweepConfig {
    std::size_t n_points = 1024;
    double length = 40.0;
    double x_left = -20.0;
    RickerSpec ic;
    double gamma = 0.5;
    std::vector<double> epsilons = {0.1, 0.05, 0.025, 0.0125}; // decreasing
    double scaling_c = 1.0;
    double scaling_p = 2.0; // beta = c * eps^p, p >= 2
    double t_final = 2.0;
    std::vector<double> comparison_times = {1.0, 2.0};
    std::vector<Window> windows = {{-10.0, 10.0}};
    std::vector<double> p_norms = {1.0, 2.0, 4.0}; // subset of [1, 6)
    double dt = 2e-3;
    double snapshot_interval = 0.05;
    double diagnostics_interval = 0.01;
    std::size_t reference_refine = 2;
    double fv_cfl = 0.45;
    FluxKind flux = FluxKind::godunov;
    std::size_t battery_nx = 6, battery_nt = 6;
};

SweepConfig default_sweep_config();
void validate(const SweepConfig& c, bool for_sweep);

struct DistanceEntry {
    double time = 0.0;
    Window window;
    double p = 0.0;
    double value = 0.0;
};

struct RunResult {
    double epsilon = 0.0, beta = 0.0;
    bool completed = true;
    std::string failure_reason;
    std::vector<DistanceEntry> distances; // vs the reference
    double entropy_violation = 0.0;       // max(0, -min R) over the battery
    double sup_linf_P = 0.0;
    double sup_linf_dxP = 0.0;
    ScalingRun scaling;
};

struct MetricTrend {
    double time = 0.0;
    Window window;
    double p = 0.0;
    std::vector<double> values; // one per completed run, coarse to fine
    bool non_increasing = true; // within 5% slack
    bool halved = true;         // final <= 0.5 * first
};

struct SweepVerdicts {
    bool all_completed = true;
    bool distances_non_increasing = true; // every metric
    bool final_half_of_first = true;      // every metric
    bool entropy_trend_ok = true;         // only evaluated when scaling_p > 2
    bool reference_converged = true;      // doubling the reference moves distances <= 10%
};

struct PConvergence {
    std::vector<double> eps_linf_dxP; // per run: eps * sup_t ||P_x||_inf
    double slope = 0.0;               // d log(eps*||P_x||_inf) / d log(eps)
    bool slope_ok = true;             // >= 0.3: decay at least like sqrt(eps), 0.2 tolerance
    double calibration = 0.0;         // coarsest-run constant in <= sqrt(eps)*C
    bool bound_ok = true;
    std::vector<double> p_gap_sup;    // sup distance of P between consecutive runs
    std::vector<double> dxp_gap_sup;  // same for P_x
    bool gaps_non_increasing = true;
};

struct ConvergenceReport {
    SweepConfig config;
    std::string provenance; // flags tool-chosen defaults
    std::vector<RunResult> runs;
    std::vector<MetricTrend> trends;
    SweepVerdicts verdicts;
    ScalingReport scaling;
    PConvergence p_convergence;
    double reference_doubling_max_change = 0.0; // relative
};

// Finite-volume solve of the limit equation on a grid refined by
// reference_refine (or refine_override if nonzero).
Trajectory run_reference(const SweepConfig& c, std::size_t refine_override = 0);

struct SweepOutput {
    ConvergenceReport report;
    std::vector<Trajectory> runs;
    Trajectory reference;
    Trajectory reference_doubled; // backs the doubling verdict; persisted for audit
};

// jobs: max concurrent dispersive runs. Individual run failures are recorded
// and the sweep continues.
SweepOutput run_sweep(const SweepConfig& c, int jobs = 1);

// Deterministic reduction from solved trajectories to the report; run_sweep
// ends with this, and the artifact checker re-runs it on stored trajectories.
ConvergenceReport assemble_report(const SweepConfig& c, const std::vector<Trajectory>& runs,
                                  const Trajectory& reference,
                                  const Trajectory& reference_doubled);

// Re-evaluates the P-convergence verdict from the report's stored numbers.
PConvergence check_p_convergence(const ConvergenceReport& report);

} // namespace pulselab
