#include "pulselab/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pulselab/dft.hpp"
#include "pulselab/errors.hpp"

namespace pulselab {

namespace detail {

void require_finite(const std::vector<double>& v, const char* who) {
    for (double x : v)
        if (!std::isfinite(x))
            throw std::invalid_argument(std::string(who) + ": non-finite values in field");
}

void require_same_grid(const Field& a, const Field& b, const char* who) {
    if (!(a.grid == b.grid))
        throw std::invalid_argument(std::string(who) + ": fields live on different grids");
}

namespace {

// signed mode index in [-(n-1)/2 .. n/2] folded so that the (even-n) Nyquist
// mode carries the negative sign
std::ptrdiff_t signed_index(std::size_t m, std::size_t n) {
    return (m < (n + 1) / 2) ? static_cast<std::ptrdiff_t>(m)
                             : static_cast<std::ptrdiff_t>(m) - static_cast<std::ptrdiff_t>(n);
}

std::size_t wrap_index(std::ptrdiff_t md, std::size_t n) {
    return static_cast<std::size_t>(md >= 0 ? md : md + static_cast<std::ptrdiff_t>(n));
}

std::vector<std::complex<double>> forward_coeffs(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::complex<double>> in(n), out(n);
    for (std::size_t j = 0; j < n; ++j) in[j] = v[j];
    dft::forward(in.data(), out.data(), n);
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& z : out) z *= inv;
    return out;
}

std::vector<double> backward_real(const std::vector<std::complex<double>>& c) {
    const std::size_t n = c.size();
    std::vector<std::complex<double>> out(n);
    dft::backward(c.data(), out.data(), n);
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = out[j].real();
    return v;
}

struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

} // namespace
} // namespace detail

using detail::signed_index;
using detail::wrap_index;

double SpectralCoeffs::wavenumber(std::size_t m) const {
    return 2.0 * M_PI * static_cast<double>(signed_index(m, grid.n)) / grid.length;
}

SpectralCoeffs to_spectral(const Field& f) {
    detail::require_finite(f.values, "to_spectral");
    return SpectralCoeffs{f.grid, detail::forward_coeffs(f.values)};
}

Field from_spectral(const SpectralCoeffs& c) {
    for (const auto& z : c.modes)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::invalid_argument("from_spectral: non-finite coefficients");
    return Field{c.grid, detail::backward_real(c.modes)};
}

SpectralCoeffs derivative(const SpectralCoeffs& c, int order) {
    detail::ensure(order >= 1 && order <= 3, "derivative: order must be 1, 2, or 3");
    const std::size_t n = c.grid.n;
    SpectralCoeffs out{c.grid, c.modes};
    for (std::size_t m = 0; m < n; ++m) {
        const double k = c.wavenumber(m);
        std::complex<double> factor;
        switch (order) { // (ik)^order
            case 1: factor = {0.0, k}; break;
            case 2: factor = {-k * k, 0.0}; break;
            default: factor = {0.0, -k * k * k}; break;
        }
        out.modes[m] *= factor;
    }
    if (n % 2 == 0 && order % 2 == 1) out.modes[n / 2] = 0.0; // no signed Nyquist
    return out;
}

Field derivative(const Field& f, int order) {
    return from_spectral(derivative(to_spectral(f), order));
}

Field cubic(const Field& f) {
    detail::require_finite(f.values, "cubic");
    const std::size_t n = f.grid.n;
    const std::size_t n2 = 2 * n;
    auto c = detail::forward_coeffs(f.values);

    std::vector<std::complex<double>> pad(n2, 0.0);
    for (std::size_t m = 0; m < n; ++m) {
        const std::ptrdiff_t md = signed_index(m, n);
        if (n % 2 == 0 && m == n / 2) {
            // split the Nyquist coefficient so the padded spectrum stays symmetric
            pad[wrap_index(static_cast<std::ptrdiff_t>(n / 2), n2)] += 0.5 * c[m];
            pad[wrap_index(-static_cast<std::ptrdiff_t>(n / 2), n2)] += 0.5 * c[m];
        } else {
            pad[wrap_index(md, n2)] = c[m];
        }
    }

    std::vector<std::complex<double>> w(n2);
    dft::backward(pad.data(), w.data(), n2);
    std::vector<std::complex<double>> w3(n2);
    for (std::size_t j = 0; j < n2; ++j) {
        const double r = w[j].real();
        w3[j] = r * r * r;
    }
    std::vector<std::complex<double>> cw(n2);
    dft::forward(w3.data(), cw.data(), n2);
    const double inv = 1.0 / static_cast<double>(n2);
    for (auto& z : cw) z *= inv;

    std::vector<std::complex<double>> out(n);
    for (std::size_t m = 0; m < n; ++m) {
        const std::ptrdiff_t md = signed_index(m, n);
        if (n % 2 == 0 && m == n / 2) {
            out[m] = cw[wrap_index(static_cast<std::ptrdiff_t>(n / 2), n2)] +
                     cw[wrap_index(-static_cast<std::ptrdiff_t>(n / 2), n2)];
        } else {
            out[m] = cw[wrap_index(md, n2)];
        }
    }
    return Field{f.grid, detail::backward_real(out)};
}

double lp_norm(const Field& f, double p) {
    detail::require_finite(f.values, "lp_norm");
    const bool isinf = std::isinf(p) && p > 0.0;
    detail::ensure(isinf || (std::isfinite(p) && p >= 1.0), "lp_norm: p must be in [1, inf]");
    if (isinf) {
        double m = 0.0;
        for (double v : f.values) m = std::max(m, std::fabs(v));
        return m;
    }
    detail::KahanSum sum;
    if (p == 2.0) {
        for (double v : f.values) sum.add(v * v);
    } else if (p == 1.0) {
        for (double v : f.values) sum.add(std::fabs(v));
    } else {
        for (double v : f.values) sum.add(std::pow(std::fabs(v), p));
    }
    return std::pow(f.grid.dx * sum.s, 1.0 / p);
}

double lp_norm_local(const Field& f, double p, double a, double b) {
    detail::require_finite(f.values, "lp_norm_local");
    detail::ensure(b > a, "lp_norm_local: window must satisfy a < b");
    const bool isinf = std::isinf(p) && p > 0.0;
    detail::ensure(isinf || (std::isfinite(p) && p >= 1.0),
                   "lp_norm_local: p must be in [1, inf]");
    detail::KahanSum sum;
    double supv = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < f.grid.n; ++j) {
        const double x = f.grid.node(j);
        if (x < a || x > b) continue;
        ++count;
        const double v = f.values[j];
        if (isinf)
            supv = std::max(supv, std::fabs(v));
        else if (p == 2.0)
            sum.add(v * v);
        else if (p == 1.0)
            sum.add(std::fabs(v));
        else
            sum.add(std::pow(std::fabs(v), p));
    }
    detail::ensure(count > 0, "lp_norm_local: window contains no grid nodes");
    if (isinf) return supv;
    return std::pow(f.grid.dx * sum.s, 1.0 / p);
}

double mean(const Field& f) {
    detail::require_finite(f.values, "mean");
    detail::KahanSum sum;
    for (double v : f.values) sum.add(v);
    return sum.s / static_cast<double>(f.grid.n);
}

Field project_zero_mean(const Field& f) {
    const double m = mean(f);
    Field out = f;
    for (double& v : out.values) v -= m;
    return out;
}

Field ricker_ic(const Grid1D& g, double amplitude, double center, double width) {
    detail::ensure(std::isfinite(amplitude), "ricker_ic: amplitude must be finite");
    detail::ensure(std::isfinite(center), "ricker_ic: center must be finite");
    detail::ensure(std::isfinite(width) && width > 0.0, "ricker_ic: width must be positive");
    detail::ensure(width >= 4.0 * g.dx, "ricker_ic: width must be at least 4 grid spacings");
    const double left_gap = center - g.x_left;
    const double right_gap = g.x_left + g.length - center;
    detail::ensure(left_gap >= 8.0 * width && right_gap >= 8.0 * width,
                   "ricker_ic: domain edges must be at least 8 widths from center");
    Field f{g, std::vector<double>(g.n)};
    for (std::size_t j = 0; j < g.n; ++j) {
        const double s = (g.node(j) - center) / width;
        f.values[j] = amplitude * (4.0 * s * s - 2.0) / (width * width) * std::exp(-s * s);
    }
    return f;
}

} // namespace pulselab
