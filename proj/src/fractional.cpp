#include "fracfield/fractional.hpp"

#include <cmath>
#include <stdexcept>

namespace fracfield {

FracParams make_frac_params(int dim, double s) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("FracParams: dim must be 1, 2 or 3");
    const double s_max = std::min(1.0, dim / 2.0);
    if (!(s > 0.0) || !(s < s_max))
        throw std::invalid_argument("FracParams: order must satisfy 0 < s < min{1, N/2}");
    FracParams p;
    p.dim = dim;
    p.s = s;
    p.crit = 2.0 * dim / (dim - 2.0 * s);
    return p;
}

SpectralField frac_laplacian(const SpectralField& su, const FracParams& p, double alpha) {
    if (su.grid.dim != p.dim) throw std::invalid_argument("frac_laplacian: dim mismatch");
    if (!(alpha > 0.0)) throw std::invalid_argument("frac_laplacian: power must be positive");
    SpectralField out = su;
    int idx[3];
    MultiIndex it(su.grid);
    std::size_t flat = 0;
    do {
        for (int a = 0; a < su.grid.dim; ++a) idx[a] = it.idx[a];
        double q = freq_norm_sq(su.grid, idx);
        out.coeffs[flat] *= (q == 0.0) ? 0.0 : std::pow(q, alpha);
        ++flat;
    } while (it.next());
    return out;
}

Field frac_laplacian(const Field& u, const FracParams& p, double alpha) {
    return to_field(frac_laplacian(to_spectral(u), p, alpha));
}

double dnorm_sq(const SpectralField& su, const FracParams& p) {
    if (su.grid.dim != p.dim) throw std::invalid_argument("dnorm_sq: dim mismatch");
    KahanSum acc;
    int idx[3];
    MultiIndex it(su.grid);
    std::size_t flat = 0;
    do {
        for (int a = 0; a < su.grid.dim; ++a) idx[a] = it.idx[a];
        double q = freq_norm_sq(su.grid, idx);
        if (q > 0.0) acc.add(std::pow(q, p.s) * std::norm(su.coeffs[flat]));
        ++flat;
    } while (it.next());
    return acc.sum * std::pow(su.grid.box_length, su.grid.dim);
}

double dnorm_sq(const Field& u, const FracParams& p) { return dnorm_sq(to_spectral(u), p); }

double dinner(const SpectralField& a, const SpectralField& b, const FracParams& p) {
    if (!same_grid(a.grid, b.grid)) throw std::invalid_argument("dinner: grid mismatch");
    KahanSum acc;
    int idx[3];
    MultiIndex it(a.grid);
    std::size_t flat = 0;
    do {
        for (int d = 0; d < a.grid.dim; ++d) idx[d] = it.idx[d];
        double q = freq_norm_sq(a.grid, idx);
        if (q > 0.0)
            acc.add(std::pow(q, p.s) * (a.coeffs[flat] * std::conj(b.coeffs[flat])).real());
        ++flat;
    } while (it.next());
    return acc.sum * std::pow(a.grid.box_length, a.grid.dim);
}

SpectralField inverse_frac_laplacian(const SpectralField& su, const FracParams& p, double alpha) {
    if (su.grid.dim != p.dim) throw std::invalid_argument("inverse_frac_laplacian: dim mismatch");
    if (!(alpha > 0.0)) throw std::invalid_argument("inverse_frac_laplacian: power must be positive");
    double scale = 0.0;
    for (const auto& c : su.coeffs) scale = std::max(scale, std::abs(c));
    if (std::abs(su.coeffs[0]) > 1e-12 * std::max(scale, 1e-300))
        throw std::invalid_argument(
            "inverse_frac_laplacian: input must be mean-free (project the zero mode first)");
    SpectralField out = su;
    out.coeffs[0] = 0.0;
    int idx[3];
    MultiIndex it(su.grid);
    std::size_t flat = 0;
    do {
        for (int a = 0; a < su.grid.dim; ++a) idx[a] = it.idx[a];
        double q = freq_norm_sq(su.grid, idx);
        if (q > 0.0) out.coeffs[flat] /= std::pow(q, alpha);
        ++flat;
    } while (it.next());
    return out;
}

Field inverse_frac_laplacian(const Field& u, const FracParams& p, double alpha) {
    return to_field(inverse_frac_laplacian(to_spectral(u), p, alpha));
}

Field zero_mean(const Field& u) {
    KahanSum acc;
    for (double v : u.values) acc.add(v);
    const double mean = acc.sum / static_cast<double>(u.values.size());
    Field out = u;
    for (auto& v : out.values) v -= mean;
    return out;
}

namespace {

// log Gamma by the Stirling series, valid for x >= 10.
double log_gamma_stirling(double x) {
    // Bernoulli B_2..B_16 terms
    static const double coeff[] = {
        1.0 / 12.0,       -1.0 / 360.0,      1.0 / 1260.0,      -1.0 / 1680.0,
        1.0 / 1188.0,     -691.0 / 360360.0, 1.0 / 156.0,       -3617.0 / 122400.0,
    };
    const double half_log_two_pi = 0.91893853320467274178032973640562;
    double series = 0.0;
    double x2 = x * x;
    double xp = x;
    for (double c : coeff) {
        series += c / xp;
        xp *= x2;
    }
    return (x - 0.5) * std::log(x) - x + half_log_two_pi + series;
}

} // namespace

double gamma_fn(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::invalid_argument("gamma_fn: argument must be positive");
    if (x >= 10.0) return std::exp(log_gamma_stirling(x));
    double shift = 1.0;
    double y = x;
    while (y < 10.0) {
        shift *= y;
        y += 1.0;
    }
    return std::exp(log_gamma_stirling(y)) / shift;
}

double sobolev_constant(const FracParams& p) {
    const double n = p.dim;
    const double s = p.s;
    double bracket = std::pow(2.0, -2.0 * s) * gamma_fn((n - 2.0 * s) / 2.0) /
                     gamma_fn((n + 2.0 * s) / 2.0) *
                     std::pow(gamma_fn(n) / gamma_fn(n / 2.0), 2.0 * s / n);
    return std::pow(bracket, p.crit / 2.0);
}

double sobolev_sharp_constant(const FracParams& p) {
    return std::pow(M_PI, -p.s * p.crit / 2.0) * sobolev_constant(p);
}

double sobolev_quotient(const Field& u, const FracParams& p) {
    const double d2 = dnorm_sq(u, p);
    if (!(d2 > 0.0))
        throw std::invalid_argument("sobolev_quotient: field has zero seminorm");
    const double num = std::pow(lp_norm(u, p.crit), p.crit);
    return num / std::pow(d2, p.crit / 2.0);
}

} // namespace fracfield
