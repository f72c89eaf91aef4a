// Real fields on a periodic grid and their spectral counterparts.
// All operations are pure: inputs are never modified.
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "pulselab/grid.hpp"

namespace pulselab {

struct Field {
    Grid1D grid;
    std::vector<double> values; // size grid.n
};

// Full symmetric mode range, modes.size() == grid.n.
// modes[m] is the Fourier coefficient of exp(i k_m x); a constant field c
// transforms to modes[0] == c.
struct SpectralCoeffs {
    Grid1D grid;
    std::vector<std::complex<double>> modes;

    // 2*pi*m_signed/length with m_signed in [-n/2, n/2).
    double wavenumber(std::size_t m) const;
};

template <class F>
Field sample(const Grid1D& g, F fn) {
    Field f{g, std::vector<double>(g.n)};
    for (std::size_t j = 0; j < g.n; ++j) f.values[j] = fn(g.node(j));
    return f;
}

SpectralCoeffs to_spectral(const Field& f);
Field from_spectral(const SpectralCoeffs& c);

// Spectral differentiation; the Nyquist mode is zeroed for odd orders.
Field derivative(const Field& f, int order);
SpectralCoeffs derivative(const SpectralCoeffs& c, int order);

// Pointwise cube with 2x zero-padded de-aliasing.
Field cubic(const Field& f);

// Rectangle rule; p in [1, inf], infinity() gives the sup norm.
double lp_norm(const Field& f, double p);
// Same, restricted to nodes with x in [a, b]. Throws if the window is empty.
double lp_norm_local(const Field& f, double p, double a, double b);

double mean(const Field& f);
Field project_zero_mean(const Field& f);

// amplitude * d^2/dx^2 exp(-((x-center)/width)^2).
// Mean-zero with a mean-zero primitive by construction. Requires
// width >= 4*spacing and both domain edges at least 8*width from center.
Field ricker_ic(const Grid1D& g, double amplitude, double center, double width);

namespace detail {
void require_finite(const std::vector<double>& v, const char* who);
void require_same_grid(const Field& a, const Field& b, const char* who);
} // namespace detail

} // namespace pulselab
