#pragma once

#include "fracfield/grid.hpp"

#include <cmath>
#include <cstdint>

namespace fracfield {

// splitmix64; fixed algorithm so seeded runs reproduce bit-identically on any
// platform (std:: distributions are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

    // uniform in (-1, 1)
    double symmetric() { return 2.0 * uniform() - 1.0; }

    // standard normal via Box-Muller
    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    std::uint64_t state_;
};

// White random field with values in (-1, 1).
Field random_field(const GridSpec& g, std::uint64_t seed);

// Mean-free white random field.
Field random_zero_mean_field(const GridSpec& g, std::uint64_t seed);

// Mean-free random field whose spectrum is confined to |m|_inf <= M/max_band_divisor
// (band limitation keeps dilation tests alias-free).
Field random_band_limited_field(const GridSpec& g, std::uint64_t seed, int max_band_divisor = 4);

// exp(-|x - center|^2 / sigma^2) on the torus (center components in box coords).
Field gaussian_bump(const GridSpec& g, double sigma, const double* center = nullptr);

} // namespace fracfield
