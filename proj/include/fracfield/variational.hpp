#pragma once

#include "fracfield/fractional.hpp"
#include "fracfield/grid.hpp"
#include "fracfield/nonlinearity.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace fracfield {

struct SolverConfig {
    double step = 0.5;          // initial relative step size
    int max_iters = 3000;
    double tol = 1e-6;          // relative tangential-gradient stationarity
    std::uint64_t seed = 12345;
    double backtracking = 0.5;  // step shrink factor on non-improvement
};

// Levels and diagnostics; quantities not computed by a given entry point stay NaN.
struct LevelsReport {
    double S1 = 0.0;
    std::vector<std::pair<double, double>> Sl;  // (l, S_l), solver values
    double l0 = 0.0;
    double cI = 0.0;
    double infimum_I = 0.0;  // script-I
    double beta = 0.0;
    double multiplier = 0.0;           // measured mu_eff at the diagnostic point
    double pohozaev_residual = 0.0;    // relative, at the certified critical point
    double nehari_residual = 0.0;      // relative, same point
    double pde_residual = 0.0;         // relative L2 residual of the multiplier equation
    double stationarity = 0.0;         // tangential gradient norm at the S_1 maximizer
    bool converged = false;
};

// I(u) = 1/2 ||u||^2 - Phi(u)
double energy(const Field& u, const Nonlinearity& nl, const FracParams& p);

// Riesz representative of I'(u): zero_mean(u) - phi_gradient(u).
Field energy_gradient(const Field& u, const Nonlinearity& nl, const FracParams& p);

// ||u||^2 - crit * Phi(u), signed; zero at solutions of (-Delta)^s u = f(u).
double pohozaev_residual(const Field& u, const Nonlinearity& nl, const FracParams& p);
double pohozaev_relative(const Field& u, const Nonlinearity& nl, const FracParams& p);

// ||u||^2 - integral f(u) u, signed.
double nehari_residual(const Field& u, const Nonlinearity& nl, const FracParams& p);
double nehari_relative(const Field& u, const Nonlinearity& nl, const FracParams& p);

// I along the dilation path zeta_u(t) = u(./t), in closed form:
// 1/2 t^{N-2s} ||u||^2 - t^N Phi(u). Exact in the continuum; no resampling.
double path_energy(const Field& u, const Nonlinearity& nl, const FracParams& p, double t);
double path_energy_from(double u_norm_sq, double phi_u, const FracParams& p, double t);

struct PathMax {
    double tstar;
    double maxval;
};
// Closed-form maximum of t -> path_energy; requires phi_u > 0.
PathMax path_max(double u_norm_sq, double phi_u, const FracParams& p);

struct SphereMaxResult {
    Field w;
    double value = 0.0;  // S_l = Phi at the last iterate
    bool converged = false;
    bool negative_phi = false;  // stagnated below Phi = 0
    int iterations = 0;
    double tangential_norm = 0.0;  // relative, at exit
};

// S_l = sup{ Phi(u) : ||u||^2 = l } by projected gradient ascent on the
// sphere with backtracking; coarse-to-fine warm start on large grids.
// Deterministic for a fixed config.
SphereMaxResult maximize_S(double l, const Nonlinearity& nl, const FracParams& p,
                           const GridSpec& grid, const SolverConfig& cfg);
SphereMaxResult maximize_S(double l, const Nonlinearity& nl, const FracParams& p,
                           const GridSpec& grid, const SolverConfig& cfg, const Field& init);

struct QuotientMinResult {
    Field w;
    double inf_I = 0.0;
    bool converged = false;
    int iterations = 0;
    double stationarity = 0.0;
    int restarts = 0;
};

// script-I = inf{ ||u||^2 : Phi(u) = 1 } through the dilation-invariant
// quotient R(u) = ||u||^2 / Phi(u)^{(N-2s)/N} on { Phi > 0 }; the constraint
// is restored analytically by Phi(u(./sigma)) = sigma^N Phi(u).
QuotientMinResult minimize_quotient(const Nonlinearity& nl, const FracParams& p,
                                    const GridSpec& grid, const SolverConfig& cfg);
QuotientMinResult minimize_quotient(const Nonlinearity& nl, const FracParams& p,
                                    const GridSpec& grid, const SolverConfig& cfg,
                                    const Field& init);

// S_1 and S_l (solver), l_0 and c(I) (closed forms), script-I (solver), and
// residual diagnostics at the maximizer of S_{l_0}.
LevelsReport levels(const Nonlinearity& nl, const FracParams& p, const GridSpec& grid,
                    const SolverConfig& cfg, const std::vector<double>& extra_levels = {});

enum class GroundStateRoute { Quotient, SphereLevel };

struct GroundState {
    Field u;                  // certified critical point (multiplier 1 when rescalable)
    double multiplier = 0.0;  // mu_eff = integral f(w) w / ||w||^2 at the constrained point
    double beta = 0.0;        // mu_eff^{-1/(2s)}
    double pde_residual = 0.0;
    LevelsReport report;
};

// Constrained critical point plus analytic certification: the grid cannot be
// rescaled, so the report carries beta and the relative PDE residual of
// (-Delta)^s w = (1/mu_eff) f(w). For the pure critical power the amplitude
// normalization c = mu_eff^{-1/(crit-2)} realizes multiplier 1 on the grid and
// the returned field is that rescaling.
GroundState ground_state(const Nonlinearity& nl, const FracParams& p, const GridSpec& grid,
                         const SolverConfig& cfg,
                         GroundStateRoute route = GroundStateRoute::Quotient);

// Spectral embedding onto a grid with doubled resolution (same box).
Field prolong(const Field& u);

} // namespace fracfield
