// Nonlocal source term: P solves -eps*P_xx + P_x = u (regularized), or
// P = antiderivative of u (the eps -> 0 limit). Both are normalized to
// mean zero over the period; the left edge stands in for -infinity.
#pragma once

#include "pulselab/field.hpp"

namespace pulselab {

struct NonlocalSolution {
    Field p;
    double boundary_value = 0.0; // p at the left grid edge, proxy for P(t,-inf)
    double mean_p = 0.0;
    double p_at_origin = 0.0;    // left-anchored value at the node nearest x = 0
};

// Spectral inversion of -eps*d_xx + d_x, zero mode pinned to zero.
// Requires |mean(u)| <= 1e-10 * ||u||_inf (NonZeroMean otherwise) and eps > 0.
NonlocalSolution solve_p_regularized(const Field& u, double epsilon);

// Mean-zero antiderivative of u (same normalization as the regularized solve).
NonlocalSolution primitive(const Field& u);

// Antiderivative of p anchored to zero at the left edge; its right-edge value
// approximates the vanishing total integral of p.
Field second_primitive(const Field& p);

} // namespace pulselab
