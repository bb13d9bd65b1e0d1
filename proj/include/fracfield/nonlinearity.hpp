#pragma once

#include "fracfield/fractional.hpp"
#include "fracfield/grid.hpp"
#include "fracfield/group.hpp"

#include <functional>
#include <string>

namespace fracfield {

enum class NonlinearityKind { CriticalPower, LogCosPower, Custom };

// Scalar pair (F, f = F') with F(0) = f(0) = 0.
// CriticalPower: F(t) = |t|^{crit}, self-similar for every factor gamma.
// LogCosPower:   F(t) = cos(ln|t|) |t|^{crit}, self-similar with factor
//                exp(4 pi / (N - 2s)).
struct Nonlinearity {
    NonlinearityKind kind = NonlinearityKind::CriticalPower;
    std::string name = "critical";
    FracParams params;
    double selfsim_gamma = 0.0;  // 0 = self-similar for every factor
    std::function<double(double)> F;
    std::function<double(double)> f;
};

Nonlinearity critical_power(const FracParams& p);
Nonlinearity log_cos_power(const FracParams& p);
Nonlinearity custom_nonlinearity(const FracParams& p, std::function<double(double)> F,
                                 std::function<double(double)> f, std::string name = "custom");

// |F(t) - gamma^{-N j} F(gamma^{(N-2s)/2 j} t)|, the self-similarity defect.
double selfsim_residual(const Nonlinearity& nl, double gamma, const FracParams& p, double t, int j);

// sup over a log-spaced sample of |F(t)| / |t|^{crit}; surfaces growth-bound
// violations instead of certifying the bound.
double growth_constant(const Nonlinearity& nl, const FracParams& p);

struct AdditivityDefect {
    double defect;       // |F(a+b) - F(a) - F(b)|
    double bound_ratio;  // defect / (|a||b|^{crit-1} + |a|^{crit-1}|b|)
};
AdditivityDefect additivity_defect(const Nonlinearity& nl, const FracParams& p, double a, double b);

// Phi(u) = integral of F(u).
double phi(const Field& u, const Nonlinearity& nl);

// Riesz representative of Phi'(u) in D^{s,2}: <grad, v>_D = integral f(u) v
// for mean-free test fields v.
Field phi_gradient(const Field& u, const Nonlinearity& nl, const FracParams& p);
SpectralField phi_gradient_spectral(const Field& u, const Nonlinearity& nl, const FracParams& p);

// Relative defect |phi(apply(g,u)) - phi(u)| / max(|phi(u)|, 1e-30).
double phi_dilation_invariance(const Field& u, const Nonlinearity& nl, const GroupElement& g,
                               const FracParams& p);

// Hypothesis (f_4'): some t with F(t) > 0, checked on a log-spaced sample.
bool has_positive_primitive(const Nonlinearity& nl);

} // namespace fracfield
