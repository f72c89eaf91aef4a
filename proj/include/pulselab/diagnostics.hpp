// Per-snapshot functionals, entropy pairs, weak entropy residuals, and the
// cross-run scaling suite.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pulselab/field.hpp"
#include "pulselab/nonlocal.hpp"

namespace pulselab {

struct Trajectory; // trajectory.hpp

struct DiagnosticsRecord {
    double t = 0.0;
    double l2_u = 0.0;
    double l6_u = 0.0;
    double linf_u = 0.0;
    double mean_u = 0.0;
    double mean_P = 0.0;
    double linf_P = 0.0;
    double l2_P = 0.0;
    double l2_dxP = 0.0;
    double l2_dxxP = 0.0;
    double l2_dxu = 0.0;
    double l2_dxxu = 0.0;
    double l1_dxu_dxxu = 0.0;      // int |u_x * u_xx| dx
    double G1 = 0.0;               // beta*||u_x||^2 - (1/12)int u^4 + gamma*||P||^2 + eps^2*gamma*||P_x||^2
    double G2 = 0.0;               // (1/6)||u||_6^6 + (3/2)eps^2*||u_x||^2
    double energy_margin = 0.0;    // exp(2*gamma*t)*||u0||^2 minus the dissipation budget
    double p_identity_residual = 0.0;  // eps^2*||P_xx||^2 + ||P_x||^2 vs ||u||^2, relative
    double up_identity_residual = 0.0; // int u*P vs eps*||P_x||^2, relative to ||u||^2
    double F_right_edge = 0.0;     // second primitive of P at the right edge
};

// Fixed, versioned column schema of diagnostics.csv.
extern const char* const kDiagnosticsSchema;          // "pulselab-diagnostics-v1"
std::vector<std::string> diagnostics_columns();
std::vector<double> diagnostics_row(const DiagnosticsRecord& r);

// Carries the running dissipation integral between records; records must be
// requested in increasing time order, starting at the initial state.
class DiagnosticsAccumulator {
  public:
    // epsilon/beta are zero for the limit-equation solver.
    DiagnosticsAccumulator(double epsilon, double beta, double gamma, const Field& u0);

    DiagnosticsRecord record(const Field& u, const Field& P, double t);
    double initial_l2_sq() const { return c0_; }

  private:
    double eps_, beta_, gamma_;
    double c0_;            // ||u0||_2^2
    double integral_ = 0.0; // int_0^t exp(-2 gamma s) ||u_x||^2 ds, trapezoid
    double last_t_ = 0.0, last_g_ = 0.0;
    bool first_ = true;
};

// One-off record (fresh accumulator; energy_margin is 0 at t = 0 by definition).
DiagnosticsRecord record(const Field& u, const Field& P, double epsilon, double beta,
                         double gamma, double t);

// Entropy / entropy-flux pair with q' = -(u^2/2) eta'.
struct EntropyPair {
    std::string name;
    std::function<double(double)> eta;
    std::function<double(double)> eta_prime;
    std::function<double(double)> q;
};

// kind: "quadratic" (eta = (u-k)^2, closed-form q),
//       "kruzkov_smooth" (C^2 quartic smoothing of |u-k| over width delta,
//       piecewise closed-form q).
EntropyPair make_entropy_pair(const std::string& kind, double k, double delta = 0.0);
// Custom pair; eta must be convex (sampled check over [-range, range]), q by quadrature.
EntropyPair make_entropy_pair(std::function<double(double)> eta,
                              std::function<double(double)> eta_prime,
                              double range, const std::string& name = "custom");

// C^1 space-time bump, cos^2 profile in each factor, unit mass.
struct BumpTest {
    double x_center = 0.0, x_radius = 0.0;
    double t_center = 0.0, t_radius = 0.0;
};

struct TestBattery {
    std::vector<BumpTest> bumps;
};

// Lattice of nx-by-nt overlapping bumps covering [xa,xb] x [ta,tb].
TestBattery make_battery(double xa, double xb, double ta, double tb,
                         std::size_t nx = 6, std::size_t nt = 6);

// min over the battery of R(phi) = int int [eta(u) phi_t + q(u) phi_x
// + gamma eta'(u) P phi] dx dt; admissibility asks R >= -tol.
double entropy_residual(const Trajectory& traj, const EntropyPair& pair,
                        const TestBattery& battery);

struct ScalingRun {
    double epsilon = 0.0, beta = 0.0;
    double sup_linf_u = 0.0;
    double sup_linf_P = 0.0;
    double sup_l6_u = 0.0;
    double sup_eps_l2_dxu = 0.0;          // sup_t eps^(1/2)... recorded as eps*||u_x||_2 budget, see report
    double int_beta_l1_dxu_dxxu = 0.0;    // beta * int_0^T int |u_x u_xx| dx dt
    double int_beta2_l2_dxxu_over_eps = 0.0; // beta^2/eps * int_0^T ||u_xx||^2 dt
};

struct ScalingReport {
    std::vector<ScalingRun> runs;
    double slope_linf_u_vs_beta = 0.0; // log-log least squares
    double sup_linf_P_coarsest = 0.0;
    bool linf_P_bounded = true;        // every run within 2x the coarsest
};

// Requires at least three completed runs with distinct beta.
ScalingReport scaling_suite(const std::vector<Trajectory>& runs);

// Least-squares slope of log(y) against log(x); used by the scaling fits.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace pulselab
