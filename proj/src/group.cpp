#include "fracfield/group.hpp"

#include "fracfield/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace fracfield {

namespace {

void check_element(const GroupElement& g) {
    if (!(g.gamma > 1.0)) throw std::invalid_argument("GroupElement: gamma must exceed 1");
    if (g.shift.empty() || g.shift.size() > 3)
        throw std::invalid_argument("GroupElement: shift must have 1..3 components");
}

// cyclic translation by whole grid points: out(x) = in(x - iy*h)
Field roll(const Field& u, const int iy[3]) {
    const GridSpec& g = u.grid;
    const int m = g.points_per_axis;
    Field out(g);
    int idx[3], src[3];
    MultiIndex it(g);
    std::size_t flat = 0;
    do {
        for (int a = 0; a < g.dim; ++a) {
            idx[a] = it.idx[a];
            src[a] = ((idx[a] - iy[a]) % m + m) % m;
        }
        out.values[flat++] = u.values[flatten(g, src)];
    } while (it.next());
    return out;
}

// multiply coefficients by exp(-i xi . z)  (translation by z in value space)
void phase_shift(SpectralField& su, const double z[3]) {
    const GridSpec& g = su.grid;
    int idx[3];
    MultiIndex it(g);
    std::size_t flat = 0;
    do {
        double ang = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            idx[a] = it.idx[a];
            ang -= freq_component(g, idx[a]) * z[a];
        }
        su.coeffs[flat++] *= std::complex<double>(std::cos(ang), std::sin(ang));
    } while (it.next());
}

// Remove per-axis content beyond M/(2 rho): compression by rho would fold it
// back onto the grid otherwise. Identity for suitably band-limited fields.
Field antialias(const Field& u, double rho) {
    const GridSpec& g = u.grid;
    const int m = g.points_per_axis;
    const double cut = m / (2.0 * rho);
    SpectralField su = to_spectral(u);
    int idx[3];
    MultiIndex it(g);
    std::size_t flat = 0;
    do {
        bool keep = true;
        for (int a = 0; a < g.dim; ++a) {
            idx[a] = it.idx[a];
            if (std::abs(signed_index(idx[a], m)) >= cut) keep = false;
        }
        if (!keep) su.coeffs[flat] = 0.0;
        ++flat;
    } while (it.next());
    return to_field(su);
}

// Exact dyadic decimation: out(x) = in(rho * x) with rho = 2^j (j >= 0),
// zero outside the central window |rho x|_inf < L/2.
Field decimate_exact(const Field& u, int rho) {
    const GridSpec& g = u.grid;
    const int m = g.points_per_axis;
    std::vector<std::vector<int>> table(g.dim, std::vector<int>(m, -1));
    for (int a = 0; a < g.dim; ++a)
        for (int k = 0; k < m; ++k) {
            long s = static_cast<long>(rho) * signed_index(k, m);
            if (s >= -m / 2 && s < m / 2) table[a][k] = static_cast<int>((s + m) % m);
        }
    Field out(g);
    int idx[3], src[3];
    MultiIndex it(g);
    std::size_t flat = 0;
    do {
        bool inside = true;
        for (int a = 0; a < g.dim; ++a) {
            idx[a] = it.idx[a];
            src[a] = table[a][idx[a]];
            if (src[a] < 0) inside = false;
        }
        out.values[flat++] = inside ? u.values[flatten(g, src)] : 0.0;
    } while (it.next());
    return out;
}

// Dyadic enlargement via zero-padded inverse transforms, one axis at a time:
// out(x) = in(x / factor), evaluated from the trig interpolant of in.
std::vector<std::complex<double>> upsample_axes(std::vector<std::complex<double>> c,
                                                const GridSpec& g, int factor) {
    const std::size_t m = static_cast<std::size_t>(g.points_per_axis);
    const std::size_t mf = m * static_cast<std::size_t>(factor);
    std::vector<std::complex<double>> fine(mf);
    std::vector<std::complex<double>> line(m);

    for (int axis = 0; axis < g.dim; ++axis) {
        std::size_t stride = 1;
        for (int a = axis + 1; a < g.dim; ++a) stride *= m;
        const std::size_t block = stride * m;
        const std::size_t total = c.size();
        for (std::size_t base = 0; base < total; base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                std::complex<double>* p = c.data() + base + off;
                for (std::size_t k = 0; k < m; ++k) line[k] = p[k * stride];
                std::fill(fine.begin(), fine.end(), std::complex<double>(0.0, 0.0));
                for (std::size_t k = 0; k < m; ++k) {
                    long ms = signed_index(static_cast<int>(k), static_cast<int>(m));
                    fine[static_cast<std::size_t>((ms + static_cast<long>(mf)) % static_cast<long>(mf))] = line[k];
                }
                fft_pow2(fine.data(), mf, +1);
                for (std::size_t k = 0; k < m; ++k) {
                    long ks = signed_index(static_cast<int>(k), static_cast<int>(m));
                    p[k * stride] =
                        fine[static_cast<std::size_t>((ks + static_cast<long>(mf)) % static_cast<long>(mf))];
                }
            }
        }
        // after the transform this axis holds values; the remaining axes act
        // on their own coefficient directions only
    }
    return c;
}

// General spectral evaluation: out(x) = sum_m c_m exp(i xi_m rho x), windowed.
std::vector<std::complex<double>> evaluate_scaled(std::vector<std::complex<double>> c,
                                                  const GridSpec& g, double rho) {
    const int m = g.points_per_axis;
    const double half = 0.5 * g.box_length;
    std::vector<std::complex<double>> kernel(static_cast<std::size_t>(m) * m);
    std::vector<char> mask(m);
    for (int i = 0; i < m; ++i) {
        double t = rho * coord_component(g, i);
        mask[i] = (t >= -half && t < half) ? 1 : 0;
        for (int k = 0; k < m; ++k) {
            double ang = freq_component(g, k) * t;
            kernel[static_cast<std::size_t>(i) * m + k] = {std::cos(ang), std::sin(ang)};
        }
    }
    std::vector<std::complex<double>> line(m), res(m);
    for (int axis = 0; axis < g.dim; ++axis) {
        std::size_t stride = 1;
        for (int a = axis + 1; a < g.dim; ++a) stride *= static_cast<std::size_t>(m);
        const std::size_t block = stride * static_cast<std::size_t>(m);
        for (std::size_t base = 0; base < c.size(); base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                std::complex<double>* p = c.data() + base + off;
                for (int k = 0; k < m; ++k) line[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k) * stride];
                for (int i = 0; i < m; ++i) {
                    if (!mask[i]) {
                        res[static_cast<std::size_t>(i)] = 0.0;
                        continue;
                    }
                    std::complex<double> s{0.0, 0.0};
                    const std::complex<double>* krow = kernel.data() + static_cast<std::size_t>(i) * m;
                    for (int k = 0; k < m; ++k) s += krow[k] * line[static_cast<std::size_t>(k)];
                    res[static_cast<std::size_t>(i)] = s;
                }
                for (int k = 0; k < m; ++k) p[static_cast<std::size_t>(k) * stride] = res[static_cast<std::size_t>(k)];
            }
        }
    }
    return c;
}

} // namespace

GroupElement make_element(double gamma, std::vector<double> shift, int level) {
    GroupElement g{gamma, std::move(shift), level};
    check_element(g);
    return g;
}

GroupElement identity_element(int dim, double gamma) {
    return make_element(gamma, std::vector<double>(static_cast<std::size_t>(dim), 0.0), 0);
}

GroupElement compose(const GroupElement& g1, const GroupElement& g2) {
    check_element(g1);
    check_element(g2);
    if (g1.gamma != g2.gamma)
        throw std::invalid_argument("compose: elements must share the same gamma");
    if (g1.shift.size() != g2.shift.size())
        throw std::invalid_argument("compose: dimension mismatch");
    GroupElement out = g1;
    const double scale = std::pow(g1.gamma, -g1.level);
    for (std::size_t a = 0; a < out.shift.size(); ++a)
        out.shift[a] = g1.shift[a] + scale * g2.shift[a];
    out.level = g1.level + g2.level;
    return out;
}

GroupElement inverse(const GroupElement& g) {
    check_element(g);
    GroupElement out = g;
    const double scale = std::pow(g.gamma, g.level);
    for (auto& y : out.shift) y = -scale * y;
    out.level = -g.level;
    return out;
}

double separation(const GroupElement& g1, const GroupElement& g2) {
    check_element(g1);
    check_element(g2);
    if (g1.gamma != g2.gamma)
        throw std::invalid_argument("separation: elements must share the same gamma");
    double d2 = 0.0;
    for (std::size_t a = 0; a < g1.shift.size(); ++a) {
        double d = g1.shift[a] - g2.shift[a];
        d2 += d * d;
    }
    return std::abs(g1.level - g2.level) + std::pow(g1.gamma, g1.level) * std::sqrt(d2);
}

int max_level(const GridSpec& grid, double gamma) {
    return static_cast<int>(std::floor(std::log(grid.points_per_axis / 8.0) / std::log(gamma) + 1e-12));
}

Field apply(const GroupElement& g, const Field& u, const FracParams& p) {
    check_element(g);
    const GridSpec& grid = u.grid;
    if (static_cast<int>(g.shift.size()) != grid.dim || grid.dim != p.dim)
        throw std::invalid_argument("apply: dimension mismatch");
    if (std::abs(g.level) > max_level(grid, g.gamma))
        throw std::domain_error("apply: |level| outside the grid-representable range");

    const int j = g.level;
    const double amp = std::pow(g.gamma, 0.5 * (p.dim - 2.0 * p.s) * j);
    const double rho = std::pow(g.gamma, j);
    const bool dyadic = (g.gamma == 2.0);

    bool has_shift = false;
    bool aligned_y = true;
    int iy[3] = {0, 0, 0};
    for (int a = 0; a < grid.dim; ++a) {
        if (g.shift[a] != 0.0) has_shift = true;
        double q = g.shift[a] / grid.spacing;
        double r = std::round(q);
        if (std::fabs(q - r) > 1e-9 * std::max(1.0, std::fabs(q))) aligned_y = false;
        iy[a] = static_cast<int>(r - grid.points_per_axis *
                                         std::floor(r / grid.points_per_axis));
    }

    Field out;
    if (j >= 0) {
        // compression: dilate about the origin, windowing to the single
        // fundamental-domain copy, then translate by y on the torus
        Field core;
        if (j == 0) {
            core = u;
        } else if (dyadic) {
            core = decimate_exact(antialias(u, 1 << j), 1 << j);
        } else {
            auto vals = evaluate_scaled(to_spectral(antialias(u, rho)).coeffs, grid, rho);
            core = Field(grid);
            for (std::size_t i = 0; i < core.values.size(); ++i) core.values[i] = vals[i].real();
        }
        if (!has_shift) {
            out = std::move(core);
        } else if (aligned_y) {
            out = roll(core, iy);
        } else {
            SpectralField sc = to_spectral(core);
            phase_shift(sc, g.shift.data());
            out = to_field(sc);
        }
    } else {
        // enlargement never wraps in the scaled coordinate; the translation
        // folds into the final argument as the phase of z = gamma^j y, which
        // keeps d^{-1} faithful even when gamma^{|j|} y leaves the box
        SpectralField su = to_spectral(u);
        if (has_shift) {
            double z[3] = {0.0, 0.0, 0.0};
            for (int a = 0; a < grid.dim; ++a) z[a] = rho * g.shift[a];
            phase_shift(su, z);
        }
        if (dyadic) {
            auto vals = upsample_axes(std::move(su.coeffs), grid, 1 << (-j));
            out = Field(grid);
            for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = vals[i].real();
        } else {
            auto vals = evaluate_scaled(std::move(su.coeffs), grid, rho);
            out = Field(grid);
            for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = vals[i].real();
        }
    }
    if (j != 0)
        for (auto& v : out.values) v *= amp;
    return out;
}

} // namespace fracfield
