#pragma once

#include "fracfield/grid.hpp"

namespace fracfield {

// Order parameters of the problem. Standing assumption 0 < s < min{1, N/2};
// crit is the Sobolev-critical exponent 2N/(N-2s).
struct FracParams {
    int dim = 1;
    double s = 0.25;
    double crit = 4.0;
};

FracParams make_frac_params(int dim, double s);

// Fourier multiplier |xi|^{2 alpha}; the zero mode is annihilated.
Field frac_laplacian(const Field& u, const FracParams& p, double alpha);
SpectralField frac_laplacian(const SpectralField& su, const FracParams& p, double alpha);

// Homogeneous seminorm squared: L^dim * sum_m |xi_m|^{2s} |c_m|^2.
// Equals lp_norm(frac_laplacian(u, s/2), 2)^2; vanishes exactly on constants.
double dnorm_sq(const Field& u, const FracParams& p);
double dnorm_sq(const SpectralField& su, const FracParams& p);

// D^{s,2} inner product of two spectral fields on the same grid.
double dinner(const SpectralField& a, const SpectralField& b, const FracParams& p);

// Spectral division by |xi|^{2 alpha} on nonzero modes. Requires a mean-free
// input (|c_0| <= 1e-12 relative); rejects otherwise since the multiplier is
// not invertible on constants.
Field inverse_frac_laplacian(const Field& u, const FracParams& p, double alpha);
SpectralField inverse_frac_laplacian(const SpectralField& su, const FracParams& p, double alpha);

// Subtract the grid mean (project out the zero frequency).
Field zero_mean(const Field& u);

// Gamma function for x > 0, relative accuracy ~1e-14. Stirling series at
// shifted argument x+k >= 10, walked back down by Gamma(x+1) = x Gamma(x).
double gamma_fn(double x);

// Embedding constant K_* of D^{s,2} -> L^{crit} in the bracketed Gamma form
//   [ 2^{-2s} G((N-2s)/2)/G((N+2s)/2) * (G(N)/G(N/2))^{2s/N} ]^{crit/2}.
double sobolev_constant(const FracParams& p);

// The saturated (sharp) embedding constant carries an extra pi^{-s} inside the
// bracket; extremal profiles (1+|x|^2)^{-(N-2s)/2} attain this value, not
// sobolev_constant. Kept separate so both normalizations stay testable.
double sobolev_sharp_constant(const FracParams& p);

// integral |u|^{crit} / dnorm_sq(u)^{crit/2}; scale-invariant, and bounded by
// sobolev_constant up to grid aliasing slack. Rejects seminorm-free input.
double sobolev_quotient(const Field& u, const FracParams& p);

} // namespace fracfield
