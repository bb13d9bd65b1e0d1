#include "fracfield/grid.hpp"

#include "fracfield/fft.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracfield {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

bool is_pow2(int m) { return m > 0 && (m & (m - 1)) == 0; }
} // namespace

GridSpec make_grid(int dim, int points_per_axis, double box_length) {
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("GridSpec: dim must be 1, 2 or 3");
    if (points_per_axis < 8 || !is_pow2(points_per_axis))
        throw std::invalid_argument("GridSpec: points_per_axis must be a power of two >= 8");
    if (!(box_length > 0.0) || !std::isfinite(box_length))
        throw std::invalid_argument("GridSpec: box_length must be positive");
    GridSpec g;
    g.dim = dim;
    g.points_per_axis = points_per_axis;
    g.box_length = box_length;
    g.spacing = box_length / points_per_axis;
    return g;
}

std::size_t grid_size(const GridSpec& g) {
    std::size_t n = 1;
    for (int a = 0; a < g.dim; ++a) n *= static_cast<std::size_t>(g.points_per_axis);
    return n;
}

bool same_grid(const GridSpec& a, const GridSpec& b) {
    return a.dim == b.dim && a.points_per_axis == b.points_per_axis &&
           a.box_length == b.box_length;
}

Field::Field(const GridSpec& g) : grid(g), values(grid_size(g), 0.0) {}

Field::Field(const GridSpec& g, std::vector<double> vals) : grid(g), values(std::move(vals)) {
    if (values.size() != grid_size(g))
        throw std::invalid_argument("Field: value array length must equal M^dim");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("Field: all values must be finite");
}

void unflatten(const GridSpec& g, std::size_t flat, int out_idx[3]) {
    for (int a = g.dim - 1; a >= 0; --a) {
        out_idx[a] = static_cast<int>(flat % g.points_per_axis);
        flat /= g.points_per_axis;
    }
}

std::size_t flatten(const GridSpec& g, const int idx[3]) {
    std::size_t f = 0;
    for (int a = 0; a < g.dim; ++a)
        f = f * g.points_per_axis + static_cast<std::size_t>(idx[a]);
    return f;
}

double coord_component(const GridSpec& g, int k) {
    return signed_index(k, g.points_per_axis) * g.spacing;
}

double freq_component(const GridSpec& g, int k) {
    return kTwoPi * signed_index(k, g.points_per_axis) / g.box_length;
}

double freq_norm_sq(const GridSpec& g, const int idx[3]) {
    double s = 0.0;
    for (int a = 0; a < g.dim; ++a) {
        double xi = freq_component(g, idx[a]);
        s += xi * xi;
    }
    return s;
}

SpectralField to_spectral(const Field& u) {
    const std::size_t n = grid_size(u.grid);
    if (u.values.size() != n) throw std::invalid_argument("to_spectral: invalid Field");
    SpectralField su;
    su.grid = u.grid;
    su.coeffs.assign(n, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) su.coeffs[i] = u.values[i];
    std::vector<std::size_t> shape(u.grid.dim, static_cast<std::size_t>(u.grid.points_per_axis));
    fft_nd(su.coeffs, shape, -1);
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& c : su.coeffs) c *= scale;
    return su;
}

Field to_field(const SpectralField& su) {
    const std::size_t n = grid_size(su.grid);
    if (su.coeffs.size() != n) throw std::invalid_argument("to_field: invalid SpectralField");
    std::vector<std::complex<double>> work = su.coeffs;
    std::vector<std::size_t> shape(su.grid.dim, static_cast<std::size_t>(su.grid.points_per_axis));
    fft_nd(work, shape, +1);
    Field u(su.grid);
    for (std::size_t i = 0; i < n; ++i) u.values[i] = work[i].real();
    return u;
}

double integrate(const Field& u) {
    KahanSum acc;
    for (double v : u.values) acc.add(v);
    return acc.sum * std::pow(u.grid.spacing, u.grid.dim);
}

double lp_norm(const Field& u, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    KahanSum acc;
    if (p == 2.0) {
        for (double v : u.values) acc.add(v * v);
    } else {
        for (double v : u.values) acc.add(std::pow(std::fabs(v), p));
    }
    return std::pow(acc.sum * std::pow(u.grid.spacing, u.grid.dim), 1.0 / p);
}

double spectral_l2_norm(const SpectralField& su) {
    KahanSum acc;
    for (const auto& c : su.coeffs) acc.add(std::norm(c));
    return std::sqrt(acc.sum * std::pow(su.grid.box_length, su.grid.dim));
}

} // namespace fracfield
