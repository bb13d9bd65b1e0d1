#include "fracfield/rng.hpp"

#include <cstdlib>

namespace fracfield {

Field random_field(const GridSpec& g, std::uint64_t seed) {
    Rng rng(seed);
    Field u(g);
    for (auto& v : u.values) v = rng.symmetric();
    return u;
}

Field random_zero_mean_field(const GridSpec& g, std::uint64_t seed) {
    Field u = random_field(g, seed);
    KahanSum acc;
    for (double v : u.values) acc.add(v);
    const double mean = acc.sum / static_cast<double>(u.values.size());
    for (auto& v : u.values) v -= mean;
    return u;
}

Field random_band_limited_field(const GridSpec& g, std::uint64_t seed, int max_band_divisor) {
    Rng rng(seed);
    SpectralField su;
    su.grid = g;
    su.coeffs.assign(grid_size(g), {0.0, 0.0});
    const int m = g.points_per_axis;
    const int band = m / max_band_divisor;

    int idx[3] = {0, 0, 0};
    MultiIndex it(g);
    do {
        for (int a = 0; a < g.dim; ++a) idx[a] = it.idx[a];
        bool in_band = true;
        bool zero = true;
        for (int a = 0; a < g.dim; ++a) {
            int s = signed_index(idx[a], m);
            if (std::abs(s) > band || std::abs(s) == m / 2) in_band = false;
            if (s != 0) zero = false;
        }
        if (!in_band || zero) continue;
        su.coeffs[flatten(g, idx)] = {rng.symmetric(), rng.symmetric()};
    } while (it.next());

    // Hermitian-symmetrize so the inverse transform is real.
    MultiIndex it2(g);
    do {
        int neg[3];
        for (int a = 0; a < g.dim; ++a) {
            idx[a] = it2.idx[a];
            neg[a] = (m - idx[a]) % m;
        }
        std::size_t i = flatten(g, idx);
        std::size_t j = flatten(g, neg);
        if (i < j) {
            auto c = 0.5 * (su.coeffs[i] + std::conj(su.coeffs[j]));
            su.coeffs[i] = c;
            su.coeffs[j] = std::conj(c);
        } else if (i == j) {
            su.coeffs[i] = su.coeffs[i].real();
        }
    } while (it2.next());
    su.coeffs[0] = 0.0;
    return to_field(su);
}

Field gaussian_bump(const GridSpec& g, double sigma, const double* center) {
    Field u(g);
    int idx[3];
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        unflatten(g, i, idx);
        double r2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            double d = coord_component(g, idx[a]) - (center ? center[a] : 0.0);
            // nearest periodic image
            d -= g.box_length * std::round(d / g.box_length);
            r2 += d * d;
        }
        u.values[i] = std::exp(-r2 / (sigma * sigma));
    }
    return u;
}

} // namespace fracfield
