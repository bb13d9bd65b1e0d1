#pragma once

#include "fracfield/fractional.hpp"
#include "fracfield/grid.hpp"

#include <map>
#include <vector>

namespace fracfield {

// Half-space slab grid: the x-torus times graded nodes 0 < y_1 < ... < y_n.
struct ExtensionGrid {
    GridSpec base;
    std::vector<double> y_nodes;
    double grading = 2.0;
};

// y_i = y_max (i/n)^grading, i = 1..n; at least 32 nodes.
ExtensionGrid make_extension_grid(const GridSpec& base, double y_max, int n_nodes,
                                  double grading = 2.0);

struct ExtensionField {
    ExtensionGrid grid;
    std::vector<Field> slices;  // w(., y_i) per node; slice at y = 0 is the trace itself
};

// Radial profile phi(z) with w_hat(xi, y) = u_hat(xi) phi(|xi| y):
//   phi'' + ((1-2s)/z) phi' - phi = 0,  phi(0) = 1,  phi(infty) = 0.
// Solved once per order by backward Riccati integration in log-amplitude form
// (overflow-free for any slab height) and matched to the Frobenius series
// A(1 + ...) + B z^{2s}(1 + ...) near z = 0 for the normalization.
// At s = 1/2 the profile reduces to exp(-z).
class ExtensionProfile {
public:
    ExtensionProfile(double s, double z_max);
    double operator()(double z) const;
    double order() const { return s_; }

private:
    double series(double z) const;
    double s_;
    double z_low_;
    double z_top_;
    double step_;
    double coef_a_, coef_b_;              // Frobenius coefficients, A-normalized
    std::vector<double> logphi_, dlogphi_;  // dense table on [z_low, z_top]
};

// Normalization beta(N,s) with integral of P_s(., 1) equal to one, computed by
// radial quadrature with an analytic far-field tail; doubling the cutoff is
// verified to move the value by less than 1e-8. The raw overload accepts any
// 0 < s < 1 (the kernel exists beyond the embedding's standing assumption).
double poisson_beta(int dim, double s);
double poisson_beta(const FracParams& p);

// kappa_s = 2^{1-2s} Gamma(1-s) / Gamma(s); kappa_s * kappa_{1-s} = 1.
double kappa(double s);
double kappa(const FracParams& p);

// s-harmonic extension, computed spectrally per frequency. The grid mean (the
// xi = 0 mode) extends as a constant, so nonnegative traces stay nonnegative.
ExtensionField extend(const Field& u, const FracParams& p, const ExtensionGrid& eg);

// Relative deviation of the weighted Dirichlet energy
// integral y^{1-2s} |grad w|^2 from kappa_s ||u||^2. Gradient: spectral in x,
// finite differences in y; boundary strip and far tail enter through analytic
// moments of the weight.
double energy_identity_residual(const Field& u, const FracParams& p, const ExtensionGrid& eg);

// Relative L^2 deviation of the extrapolated weighted flux
// -lim y^{1-2s} w_y from kappa_s (-Delta)^s u.
double neumann_trace_residual(const Field& u, const FracParams& p, const ExtensionGrid& eg);

} // namespace fracfield
