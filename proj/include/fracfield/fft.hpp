#pragma once

#include <complex>
#include <vector>

namespace fracfield {

// In-place radix-2 complex FFT, power-of-two length.
// sign = -1: forward (e^{-i 2 pi k n / M}), sign = +1: inverse WITHOUT the 1/M factor.
void fft_pow2(std::complex<double>* data, std::size_t n, int sign);

// Transform every line of an n-dimensional row-major tensor along one axis.
// shape[a] is the extent of axis a; all extents must be powers of two.
void fft_axis(std::vector<std::complex<double>>& data,
              const std::vector<std::size_t>& shape, std::size_t axis, int sign);

// Full n-dimensional transform (all axes), unnormalized.
void fft_nd(std::vector<std::complex<double>>& data,
            const std::vector<std::size_t>& shape, int sign);

} // namespace fracfield
