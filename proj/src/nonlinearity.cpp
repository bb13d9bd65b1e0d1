#include "fracfield/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

namespace fracfield {

namespace {
// Below this the |t|^{crit} factor underflows anyway; an explicit branch keeps
// ln|t| out of the non-finite range.
constexpr double kTinyArg = 1e-300;
} // namespace

Nonlinearity critical_power(const FracParams& p) {
    Nonlinearity nl;
    nl.kind = NonlinearityKind::CriticalPower;
    nl.name = "critical";
    nl.params = p;
    nl.selfsim_gamma = 0.0;
    const double crit = p.crit;
    nl.F = [crit](double t) { return std::pow(std::fabs(t), crit); };
    nl.f = [crit](double t) {
        if (t == 0.0) return 0.0;
        return crit * std::pow(std::fabs(t), crit - 2.0) * t;
    };
    return nl;
}

Nonlinearity log_cos_power(const FracParams& p) {
    Nonlinearity nl;
    nl.kind = NonlinearityKind::LogCosPower;
    nl.name = "logcos";
    nl.params = p;
    nl.selfsim_gamma = std::exp(4.0 * M_PI / (p.dim - 2.0 * p.s));
    const double crit = p.crit;
    nl.F = [crit](double t) {
        double a = std::fabs(t);
        if (a < kTinyArg) return 0.0;
        return std::cos(std::log(a)) * std::pow(a, crit);
    };
    nl.f = [crit](double t) {
        double a = std::fabs(t);
        if (a < kTinyArg) return 0.0;
        double la = std::log(a);
        return (crit * std::cos(la) - std::sin(la)) * std::pow(a, crit - 2.0) * t;
    };
    return nl;
}

Nonlinearity custom_nonlinearity(const FracParams& p, std::function<double(double)> F,
                                 std::function<double(double)> f, std::string name) {
    if (!F || !f) throw std::invalid_argument("custom_nonlinearity: F and f required");
    if (F(0.0) != 0.0 || f(0.0) != 0.0)
        throw std::invalid_argument("custom_nonlinearity: F(0) and f(0) must vanish");
    Nonlinearity nl;
    nl.kind = NonlinearityKind::Custom;
    nl.name = std::move(name);
    nl.params = p;
    nl.F = std::move(F);
    nl.f = std::move(f);
    return nl;
}

double selfsim_residual(const Nonlinearity& nl, double gamma, const FracParams& p, double t, int j) {
    if (!(gamma > 1.0)) throw std::invalid_argument("selfsim_residual: gamma must exceed 1");
    const double a = 0.5 * (p.dim - 2.0 * p.s);
    const double scaled = std::pow(gamma, a * j) * t;
    return std::fabs(nl.F(t) - std::pow(gamma, -static_cast<double>(p.dim) * j) * nl.F(scaled));
}

double growth_constant(const Nonlinearity& nl, const FracParams& p) {
    double sup = 0.0;
    const int samples = 400;
    for (int i = 0; i <= samples; ++i) {
        double t = std::pow(10.0, -8.0 + 16.0 * i / samples);
        for (double sgn : {1.0, -1.0}) {
            double ratio = std::fabs(nl.F(sgn * t)) / std::pow(t, p.crit);
            if (!std::isfinite(ratio))
                throw std::runtime_error("growth_constant: overflow while sampling |F(t)|/|t|^crit");
            sup = std::max(sup, ratio);
        }
    }
    return sup;
}

AdditivityDefect additivity_defect(const Nonlinearity& nl, const FracParams& p, double a, double b) {
    if (a == 0.0 && b == 0.0)
        throw std::invalid_argument("additivity_defect: (a, b) must not both vanish");
    const double defect = std::fabs(nl.F(a + b) - nl.F(a) - nl.F(b));
    const double denom = std::fabs(a) * std::pow(std::fabs(b), p.crit - 1.0) +
                         std::pow(std::fabs(a), p.crit - 1.0) * std::fabs(b);
    return {defect, denom > 0.0 ? defect / denom : 0.0};
}

double phi(const Field& u, const Nonlinearity& nl) {
    KahanSum acc;
    for (double v : u.values) acc.add(nl.F(v));
    return acc.sum * std::pow(u.grid.spacing, u.grid.dim);
}

SpectralField phi_gradient_spectral(const Field& u, const Nonlinearity& nl, const FracParams& p) {
    Field fu(u.grid);
    for (std::size_t i = 0; i < u.values.size(); ++i) fu.values[i] = nl.f(u.values[i]);
    SpectralField sfu = to_spectral(fu);
    sfu.coeffs[0] = 0.0;
    return inverse_frac_laplacian(sfu, p, p.s);
}

Field phi_gradient(const Field& u, const Nonlinearity& nl, const FracParams& p) {
    return to_field(phi_gradient_spectral(u, nl, p));
}

double phi_dilation_invariance(const Field& u, const Nonlinearity& nl, const GroupElement& g,
                               const FracParams& p) {
    const double base = phi(u, nl);
    const double moved = phi(apply(g, u, p), nl);
    return std::fabs(moved - base) / std::max(std::fabs(base), 1e-30);
}

bool has_positive_primitive(const Nonlinearity& nl) {
    for (int i = 0; i <= 120; ++i) {
        double t = std::pow(10.0, -3.0 + 6.0 * i / 120.0);
        if (nl.F(t) > 0.0 || nl.F(-t) > 0.0) return true;
    }
    return false;
}

} // namespace fracfield
