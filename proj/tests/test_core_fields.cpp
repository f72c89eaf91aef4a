#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>

#include "helpers.hpp"
#include "pulselab/field.hpp"

using namespace pulselab;
const double inf = std::numeric_limits<double>::infinity();

TEST_CASE("grid construction and validation") {
    Grid1D g = make_grid(64, 16.0, -8.0);
    CHECK(g.n == 64);
    CHECK(g.dx == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.node(0) == -8.0);
    CHECK(g.node(32) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(g.nodes().size() == 64);

    CHECK_THROWS_AS(make_grid(7, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(64, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(64, -1.0), std::invalid_argument);
}

TEST_CASE("transform round trip and linearity") {
    Grid1D g = make_grid(256, 40.0, -20.0);
    Field f = testutil::random_smooth_field(g, 11);
    Field g2 = testutil::random_smooth_field(g, 22);

    Field back = from_spectral(to_spectral(f));
    CHECK(testutil::max_abs_diff(f.values, back.values) <= 1e-12);

    // to_spectral(a f + b g) = a to_spectral(f) + b to_spectral(g)
    const double a = 1.7, b = -0.3;
    Field combo{g, std::vector<double>(g.n)};
    for (std::size_t j = 0; j < g.n; ++j)
        combo.values[j] = a * f.values[j] + b * g2.values[j];
    auto cf = to_spectral(f), cg = to_spectral(g2), cc = to_spectral(combo);
    double worst = 0.0;
    for (std::size_t m = 0; m < g.n; ++m)
        worst = std::max(worst, std::abs(cc.modes[m] - (a * cf.modes[m] + b * cg.modes[m])));
    CHECK(worst <= 1e-12);
}

TEST_CASE("constant and single-mode coefficients") {
    Grid1D g = make_grid(64, 8.0);
    Field c = sample(g, [](double) { return 3.5; });
    auto cs = to_spectral(c);
    CHECK(std::abs(cs.modes[0] - 3.5) <= 1e-13);
    for (std::size_t m = 1; m < g.n; ++m) CHECK(std::abs(cs.modes[m]) <= 1e-13);

    // sin(2 pi x / L) lives in the +-1 mode pair with coefficients -+ i/2
    Field s = sample(g, [&](double x) { return std::sin(2.0 * M_PI * x / g.length); });
    auto ss = to_spectral(s);
    CHECK(std::abs(ss.modes[1] - std::complex<double>(0.0, -0.5)) <= 1e-13);
    CHECK(std::abs(ss.modes[g.n - 1] - std::complex<double>(0.0, 0.5)) <= 1e-13);
}

TEST_CASE("parseval") {
    Grid1D g = make_grid(512, 40.0, -20.0);
    Field f = testutil::random_smooth_field(g, 33);
    auto c = to_spectral(f);
    double sum = 0.0;
    for (auto& m : c.modes) sum += std::norm(m);
    double lhs = lp_norm(f, 2.0);
    double rhs = std::sqrt(g.length * sum);
    CHECK(std::fabs(lhs * lhs - rhs * rhs) <= 1e-10 * lhs * lhs);
}

TEST_CASE("spectral derivative against closed forms") {
    Grid1D g = make_grid(256, 40.0, -20.0);

    // first derivative of sin(2 pi x / L), relative error <= 1e-10
    Field s = sample(g, [&](double x) { return std::sin(2.0 * M_PI * x / g.length); });
    Field ds = derivative(s, 1);
    const double k1 = 2.0 * M_PI / g.length;
    double worst = 0.0;
    for (std::size_t j = 0; j < g.n; ++j)
        worst = std::max(worst, std::fabs(ds.values[j] - k1 * std::cos(k1 * g.node(j))));
    CHECK(worst <= 1e-10 * k1);

    // third derivative of exp(-x^2) is (12x - 8x^3) exp(-x^2)
    Grid1D gg = make_grid(1024, 40.0, -20.0);
    Field e = sample(gg, [](double x) { return std::exp(-x * x); });
    Field d3 = derivative(e, 3);
    worst = 0.0;
    for (std::size_t j = 0; j < gg.n; ++j) {
        double x = gg.node(j);
        double exact = (12.0 * x - 8.0 * x * x * x) * std::exp(-x * x);
        worst = std::max(worst, std::fabs(d3.values[j] - exact));
    }
    CHECK(worst <= 1e-9);

    CHECK_THROWS_AS(derivative(s, -1), std::invalid_argument);
}

TEST_CASE("nyquist handling in odd derivatives") {
    Grid1D g = make_grid(64, 8.0);
    // put energy exactly at the Nyquist mode: alternating +-1
    Field f{g, std::vector<double>(g.n)};
    for (std::size_t j = 0; j < g.n; ++j) f.values[j] = (j % 2 == 0) ? 1.0 : -1.0;
    Field d1 = derivative(f, 1);
    for (double v : d1.values) CHECK(std::fabs(v) <= 1e-12); // odd order: zeroed
    Field d2 = derivative(f, 2);
    double knyq = M_PI / g.dx;
    for (std::size_t j = 0; j < g.n; ++j)
        CHECK(d2.values[j] == doctest::Approx(-knyq * knyq * f.values[j]).epsilon(1e-12));
}

TEST_CASE("cubic: triple angle identity") {
    Grid1D g = make_grid(128, 2.0 * M_PI);
    // sin^3(3x) = (3 sin 3x - sin 9x)/4; both 3 and 9 resolved after padding
    Field s = sample(g, [](double x) { return std::sin(3.0 * x); });
    Field c = cubic(s);
    double worst = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
        double x = g.node(j);
        double exact = (3.0 * std::sin(3.0 * x) - std::sin(9.0 * x)) / 4.0;
        worst = std::max(worst, std::fabs(c.values[j] - exact));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("cubic equals pointwise cube for band-limited input") {
    Grid1D g = make_grid(192, 40.0, -20.0);
    // modes up to n/6 = 32: the cube is then exactly representable
    Field f = testutil::random_smooth_field(g, 44, 24);
    Field c = cubic(f);
    double worst = 0.0;
    for (std::size_t j = 0; j < g.n; ++j)
        worst = std::max(worst, std::fabs(c.values[j] - std::pow(f.values[j], 3)));
    CHECK(worst <= 1e-10);
}

TEST_CASE("lp norms: gaussian closed forms") {
    Grid1D g = make_grid(1024, 40.0, -20.0);
    Field e = sample(g, [](double x) { return std::exp(-x * x); });

    // ||exp(-x^2)||_2 = (pi/2)^(1/4)
    double expect = std::pow(M_PI / 2.0, 0.25);
    CHECK(std::fabs(lp_norm(e, 2.0) - expect) <= 1e-8 * expect);

    CHECK(lp_norm(e, inf) == doctest::Approx(1.0).epsilon(1e-12));

    // windowed L2 via erf: int_a^b exp(-2x^2) = sqrt(pi/8) (erf(sqrt2 b) - erf(sqrt2 a))
    double a = -1.0, b = 2.0;
    double win = std::sqrt(std::sqrt(M_PI / 8.0) *
                           (std::erf(std::sqrt(2.0) * b) - std::erf(std::sqrt(2.0) * a)));
    CHECK(std::fabs(lp_norm_local(e, 2.0, a, b) - win) <= 5e-3 * win); // rectangle rule on a window
    // window containing everything matches the global norm exactly
    CHECK(lp_norm_local(e, 2.0, -20.0, 20.0) == doctest::Approx(lp_norm(e, 2.0)).epsilon(1e-14));

    CHECK_THROWS_AS(lp_norm(e, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(lp_norm_local(e, 2.0, 5.0, 5.0 - 1.0), std::invalid_argument);
    CHECK_THROWS_AS(lp_norm_local(e, 2.0, 100.0, 101.0), std::invalid_argument); // empty
}

TEST_CASE("mean and projection") {
    Grid1D g = make_grid(256, 40.0, -20.0);
    Field f = sample(g, [](double x) { return 2.0 + std::sin(0.3 * x); });
    Field p = project_zero_mean(f);
    CHECK(std::fabs(mean(p)) <= 1e-14 * lp_norm(f, inf));
    Field pp = project_zero_mean(p);
    CHECK(testutil::max_abs_diff(p.values, pp.values) <= 1e-15);
}

TEST_CASE("ricker datum") {
    Grid1D g = make_grid(1024, 40.0, -20.0);
    Field u0 = ricker_ic(g, 1.0, 0.0, 1.0);

    // closed form: (4s^2 - 2) exp(-s^2), peak -2 at the center
    for (std::size_t j = 0; j < g.n; ++j) {
        double s = g.node(j);
        double exact = (4.0 * s * s - 2.0) * std::exp(-s * s);
        CHECK(std::fabs(u0.values[j] - exact) <= 1e-14);
    }

    CHECK(std::fabs(mean(u0)) <= 1e-13);

    // cumulative-quadrature check: the primitive is mean-zero too
    auto prim = testutil::trapezoid_cumulative(u0.values, g.dx);
    double m = 0.0;
    for (double v : prim) m += v;
    m /= (double)prim.size();
    CHECK(std::fabs(m) <= 1e-12);

    Field z = ricker_ic(g, 0.0, 0.0, 1.0);
    for (double v : z.values) CHECK(v == 0.0);

    CHECK_THROWS_AS(ricker_ic(g, 1.0, 0.0, 0.1 * g.dx), std::invalid_argument); // width < 4 dx
    CHECK_THROWS_AS(ricker_ic(g, 1.0, 18.0, 1.0), std::invalid_argument);       // edge too close
    CHECK_THROWS_AS(ricker_ic(g, 1.0, 0.0, 3.0), std::invalid_argument);        // 8*width > 20
}

TEST_CASE("non-finite input rejected") {
    Grid1D g = make_grid(64, 8.0);
    Field f = sample(g, [](double) { return 1.0; });
    f.values[5] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(to_spectral(f), std::invalid_argument);
    CHECK_THROWS_AS(lp_norm(f, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(cubic(f), std::invalid_argument);
}

TEST_CASE("wavenumber layout") {
    Grid1D g = make_grid(8, 8.0);
    auto c = to_spectral(sample(g, [](double) { return 0.0; }));
    CHECK(c.wavenumber(0) == 0.0);
    CHECK(c.wavenumber(1) == doctest::Approx(2.0 * M_PI / 8.0));
    CHECK(c.wavenumber(4) == doctest::Approx(-4.0 * 2.0 * M_PI / 8.0)); // Nyquist, negative convention
    CHECK(c.wavenumber(7) == doctest::Approx(-2.0 * M_PI / 8.0));
}
