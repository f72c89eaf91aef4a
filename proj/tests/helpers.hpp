// Shared test utilities: deterministic field synthesis and independent
// low-tech oracles (finite differences, trapezoid sums, dense solves).
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pulselab/field.hpp"

namespace testutil {

// Smooth zero-mean periodic field from a fixed seed: a short cosine/sine sum
// with spectrally decaying random amplitudes. No FFT involved.
inline pulselab::Field random_smooth_field(const pulselab::Grid1D& g, std::uint32_t seed,
                                           int modes = 12, double amplitude = 1.0) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> a(modes + 1, 0.0), b(modes + 1, 0.0);
    for (int m = 1; m <= modes; ++m) {
        double decay = std::exp(-std::pow(m / 4.0, 2));
        a[m] = gauss(rng) * decay;
        b[m] = gauss(rng) * decay;
    }
    pulselab::Field f{g, std::vector<double>(g.n, 0.0)};
    const double two_pi = 2.0 * M_PI;
    for (std::size_t j = 0; j < g.n; ++j) {
        double x = g.node(j), s = 0.0;
        for (int m = 1; m <= modes; ++m) {
            double ph = two_pi * m * (x - g.x_left) / g.length;
            s += a[m] * std::cos(ph) + b[m] * std::sin(ph);
        }
        f.values[j] = amplitude * s;
    }
    return f;
}

// Fourth-order centered first derivative, periodic.
inline std::vector<double> fd_derivative(const std::vector<double>& f, double dx) {
    const std::size_t n = f.size();
    std::vector<double> d(n);
    auto at = [&](std::ptrdiff_t j) { return f[(j % (std::ptrdiff_t)n + n) % n]; };
    for (std::size_t j = 0; j < n; ++j) {
        auto i = (std::ptrdiff_t)j;
        d[j] = (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) / (12.0 * dx);
    }
    return d;
}

// Fourth-order centered second derivative, periodic.
inline std::vector<double> fd_second_derivative(const std::vector<double>& f, double dx) {
    const std::size_t n = f.size();
    std::vector<double> d(n);
    auto at = [&](std::ptrdiff_t j) { return f[(j % (std::ptrdiff_t)n + n) % n]; };
    for (std::size_t j = 0; j < n; ++j) {
        auto i = (std::ptrdiff_t)j;
        d[j] = (-at(i + 2) + 16.0 * at(i + 1) - 30.0 * at(i) + 16.0 * at(i - 1) - at(i - 2)) /
               (12.0 * dx * dx);
    }
    return d;
}

// Cumulative trapezoid from the left edge (independent primitive oracle).
inline std::vector<double> trapezoid_cumulative(const std::vector<double>& f, double dx) {
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t j = 1; j < f.size(); ++j)
        out[j] = out[j - 1] + 0.5 * dx * (f[j - 1] + f[j]);
    return out;
}

// Dense Gaussian elimination with partial pivoting; A is row-major n x n.
inline std::vector<double> dense_solve(std::vector<double> A, std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(A[r * n + col]) > std::fabs(A[piv * n + col])) piv = r;
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(A[col * n + c], A[piv * n + c]);
            std::swap(rhs[col], rhs[piv]);
        }
        double d = A[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            double m = A[r * n + col] / d;
            if (m == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) A[r * n + c] -= m * A[col * n + c];
            rhs[r] -= m * rhs[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t ri = n; ri-- > 0;) {
        double s = rhs[ri];
        for (std::size_t c = ri + 1; c < n; ++c) s -= A[ri * n + c] * x[c];
        x[ri] = s / A[ri * n + ri];
    }
    return x;
}

// Solves -eps P'' + P' = u on the periodic grid with fourth-order central
// differences and the mean-zero gauge, by a dense solve. Independent of the
// spectral path end to end.
inline std::vector<double> fd_elliptic_solve(const std::vector<double>& u, double dx,
                                             double eps) {
    const std::size_t n = u.size();
    std::vector<double> A(n * n, 0.0);
    auto wrap = [&](std::ptrdiff_t j) { return (std::size_t)((j % (std::ptrdiff_t)n + n) % n); };
    const double d1[5] = {1.0, -8.0, 0.0, 8.0, -1.0};        // / 12 dx
    const double d2[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};    // / 12 dx^2
    for (std::size_t r = 0; r < n; ++r) {
        for (int o = -2; o <= 2; ++o) {
            std::size_t c = wrap((std::ptrdiff_t)r + o);
            A[r * n + c] += -eps * d2[o + 2] / (12.0 * dx * dx) + d1[o + 2] / (12.0 * dx);
        }
        // pin the mean: A + ones*ones^T/n keeps mean-zero solutions unchanged
        for (std::size_t c = 0; c < n; ++c) A[r * n + c] += 1.0 / (double)n;
    }
    return dense_solve(std::move(A), u);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

} // namespace testutil
