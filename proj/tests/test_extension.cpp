#include "fracfield/extension.hpp"
#include "fracfield/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace fracfield;

namespace {

// Independent oracle for the extension profile: phi(z) = 2^{1-s}/Gamma(s)
// z^s K_s(z), with K_s from its integral representation
// K_s(z) = int_0^infty exp(-z cosh t) cosh(s t) dt (trapezoid in t, the
// integrand decays double-exponentially).
double bessel_k(double nu, double z) {
    const double h = 1e-3;
    double sum = 0.5 * std::exp(-z);  // t = 0 term
    for (int k = 1; k * h < 40.0; ++k) {
        double t = k * h;
        double term = std::exp(-z * std::cosh(t)) * std::cosh(nu * t);
        sum += term;
        if (term < 1e-300) break;
    }
    return sum * h;
}

double phi_oracle(double s, double z) {
    return std::pow(2.0, 1.0 - s) / gamma_fn(s) * std::pow(z, s) * bessel_k(s, z);
}

} // namespace

TEST_CASE("extension grid validation") {
    GridSpec g = make_grid(1, 64, 10.0);
    CHECK_THROWS_AS(make_extension_grid(g, 10.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(make_extension_grid(g, -1.0, 64), std::invalid_argument);
    ExtensionGrid eg = make_extension_grid(g, 10.0, 64, 2.0);
    CHECK(eg.y_nodes.size() == 64);
    CHECK(eg.y_nodes.front() > 0.0);
    for (std::size_t i = 1; i < eg.y_nodes.size(); ++i)
        CHECK(eg.y_nodes[i] > eg.y_nodes[i - 1]);
    CHECK(eg.y_nodes.back() == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("extension profile: exponential at s = 1/2, Bessel oracle elsewhere") {
    ExtensionProfile half(0.5, 30.0);
    CHECK(std::fabs(half(1.0) - std::exp(-1.0)) < 1e-8);
    for (double z = 0.05; z < 25.0; z += 0.617)
        CHECK(half(z) == doctest::Approx(std::exp(-z)).epsilon(1e-10));

    for (double s : {0.25, 0.4, 0.75}) {
        ExtensionProfile prof(s, 20.0);
        CHECK(prof(0.0) == 1.0);
        for (double z : {0.05, 0.3, 1.0, 3.0, 8.0})
            CHECK(prof(z) == doctest::Approx(phi_oracle(s, z)).epsilon(1e-7));
        // monotone decay
        double prev = 1.0;
        for (double z = 0.01; z < 15.0; z += 0.05) {
            double v = prof(z);
            CHECK(v < prev + 1e-14);
            CHECK(v > 0.0);
            prev = v;
        }
    }
}

TEST_CASE("poisson kernel normalization") {
    CHECK(poisson_beta(1, 0.5) == doctest::Approx(1.0 / M_PI).epsilon(1e-8));

    // closed form beta = Gamma((N+2s)/2) / (pi^{N/2} Gamma(s)) as oracle
    for (int dim : {1, 2, 3}) {
        for (double s : {0.25, 0.4, 0.75}) {
            double expect = gamma_fn(0.5 * (dim + 2.0 * s)) /
                            (std::pow(M_PI, 0.5 * dim) * gamma_fn(s));
            CHECK(poisson_beta(dim, s) == doctest::Approx(expect).epsilon(1e-8));
        }
    }

    // definition round trip: with the returned beta the kernel mass is one
    double beta = poisson_beta(2, 0.75);
    double mass = 0.0;
    int n = 200000;
    double rmax = 2000.0;
    for (int i = 0; i < n; ++i) {
        double r = rmax * (i + 0.5) / n;
        mass += 2.0 * M_PI * r * beta * std::pow(1.0 + r * r, -0.5 * (2.0 + 1.5)) * (rmax / n);
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));  // midpoint-rule check
}

TEST_CASE("kappa values and reciprocity") {
    CHECK(kappa(0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kappa(0.25) == doctest::Approx(0.4780).epsilon(1e-4));
    CHECK(kappa(0.75) == doctest::Approx(2.0920).epsilon(1e-4));
    for (double s : {0.1, 0.25, 0.5, 0.62, 0.9})
        CHECK(std::fabs(kappa(s) * kappa(1.0 - s) - 1.0) < 1e-10);
}

TEST_CASE("single-mode extension is separable and satisfies both identities") {
    GridSpec g = make_grid(2, 64, 20.0);
    FracParams p = make_frac_params(2, 0.5);
    Field mode(g);
    int idx[3];
    for (std::size_t i = 0; i < mode.values.size(); ++i) {
        unflatten(g, i, idx);
        mode.values[i] = std::cos(3.0 * 2.0 * M_PI * coord_component(g, idx[0]) / g.box_length);
    }
    ExtensionGrid eg = make_extension_grid(g, 20.0, 128);
    ExtensionField w = extend(mode, p, eg);
    const double q = 3.0 * 2.0 * M_PI / g.box_length;
    for (std::size_t yi = 0; yi < eg.y_nodes.size(); yi += 13) {
        double decay = std::exp(-q * eg.y_nodes[yi]);  // s = 1/2 profile
        for (std::size_t i = 0; i < mode.values.size(); i += 41)
            CHECK(w.slices[yi].values[i] ==
                  doctest::Approx(decay * mode.values[i]).epsilon(1e-8));
    }

    CHECK(energy_identity_residual(mode, p, eg) < 1e-3);
    CHECK(neumann_trace_residual(mode, p, eg) < 1e-3);
}

TEST_CASE("energy identity and trace residuals on bumps, refining") {
    GridSpec g = make_grid(1, 256, 40.0);
    FracParams p = make_frac_params(1, 0.45);
    Field u = zero_mean(gaussian_bump(g, 2.0));

    CHECK(energy_identity_residual(Field(g), p, make_extension_grid(g, 20.0, 64)) == 0.0);

    double prev_e = 1e300, prev_t = 1e300;
    for (int ny : {64, 128, 256}) {
        ExtensionGrid eg = make_extension_grid(g, 20.0, ny);
        double e = energy_identity_residual(u, p, eg);
        double t = neumann_trace_residual(u, p, eg);
        CHECK(e < 0.03);
        CHECK(t < 0.05);
        CHECK(e < prev_e);
        CHECK(t < 0.7 * prev_t);  // better than halving per doubled resolution
        prev_e = e;
        prev_t = t;
    }
}

TEST_CASE("energy identity residual decreases under simultaneous refinement") {
    FracParams p = make_frac_params(1, 0.3);
    double prev = 1e300;
    for (int level = 0; level < 3; ++level) {
        GridSpec g = make_grid(1, 128 << level, 40.0);
        Field u = zero_mean(gaussian_bump(g, 2.0));
        ExtensionGrid eg = make_extension_grid(g, 20.0, 48 << level);
        double e = energy_identity_residual(u, p, eg);
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("kernel positivity: nonnegative traces extend nonnegatively") {
    GridSpec g = make_grid(1, 128, 30.0);
    FracParams p = make_frac_params(1, 0.35);
    Field u = gaussian_bump(g, 2.0);
    ExtensionGrid eg = make_extension_grid(g, 10.0, 48);
    ExtensionField w = extend(u, p, eg);
    for (const auto& slice : w.slices)
        for (double v : slice.values) CHECK(v > -1e-12);
}

TEST_CASE("spectral extension agrees with direct kernel quadrature") {
    // slow oracle on a coarse grid: w(x, y) = int P_s(x - xi, y) u(xi) dxi
    // evaluated by rectangle-rule quadrature with periodic images
    GridSpec g = make_grid(1, 128, 40.0);
    FracParams p = make_frac_params(1, 0.35);
    Field u = zero_mean(gaussian_bump(g, 2.0));
    ExtensionGrid eg = make_extension_grid(g, 8.0, 32, 1.0);  // uniform nodes
    ExtensionField w = extend(u, p, eg);

    const double beta = poisson_beta(p.dim, p.s);
    auto kernel_route = [&](double x, double y) {
        KahanSum acc;
        for (int img = -2; img <= 2; ++img)
            for (int i = 0; i < g.points_per_axis; ++i) {
                double xi = coord_component(g, i) + img * g.box_length;
                double d = x - xi;
                acc.add(std::pow(y, 2.0 * p.s) /
                        std::pow(d * d + y * y, 0.5 * (p.dim + 2.0 * p.s)) * u.values[i]);
            }
        return beta * acc.sum * g.spacing;
    };

    for (std::size_t yi : {std::size_t{7}, std::size_t{15}, std::size_t{31}}) {
        double y = eg.y_nodes[yi];
        for (int i = 0; i < g.points_per_axis; i += 17) {
            double direct = kernel_route(coord_component(g, i), y);
            CHECK(w.slices[yi].values[i] == doctest::Approx(direct).epsilon(5e-3));
        }
    }
}

TEST_CASE("trace continuity toward y = 0") {
    GridSpec g = make_grid(1, 128, 30.0);
    FracParams p = make_frac_params(1, 0.35);
    Field u = zero_mean(gaussian_bump(g, 2.0));
    ExtensionGrid eg = make_extension_grid(g, 10.0, 64);
    ExtensionField w = extend(u, p, eg);
    auto l2_to_u = [&](const Field& slice) {
        double acc = 0.0;
        for (std::size_t i = 0; i < u.values.size(); ++i)
            acc += std::pow(slice.values[i] - u.values[i], 2);
        return std::sqrt(acc * g.spacing);
    };
    double e1 = l2_to_u(w.slices[0]);
    double e4 = l2_to_u(w.slices[3]);
    CHECK(e1 < e4);
    CHECK(e1 < 0.1 * lp_norm(u, 2.0));
}
