#include "fracfield/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace fracfield {

namespace {

// Half-table of e^{-i pi k / (n/2)} per size, shared by forward and inverse.
// Node addresses in std::map are stable, so the reference stays valid after
// the lock is released; the mutex keeps concurrent transforms safe.
const std::vector<std::complex<double>>& twiddle_table(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::vector<std::complex<double>>> cache;
    std::lock_guard<std::mutex> guard(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> w(n / 2);
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (std::size_t k = 0; k < n / 2; ++k) {
        double ang = -two_pi * static_cast<double>(k) / static_cast<double>(n);
        w[k] = {std::cos(ang), std::sin(ang)};
    }
    return cache.emplace(n, std::move(w)).first->second;
}

} // namespace

void fft_pow2(std::complex<double>* a, std::size_t n, int sign) {
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_pow2: length must be a power of two");
    if (n == 1) return;

    // bit reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    const auto& w = twiddle_table(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> tw = w[k * step];
                if (sign > 0) tw = std::conj(tw);
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * tw;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

void fft_axis(std::vector<std::complex<double>>& data,
              const std::vector<std::size_t>& shape, std::size_t axis, int sign) {
    const std::size_t dim = shape.size();
    std::size_t total = 1;
    for (std::size_t e : shape) total *= e;
    if (data.size() != total) throw std::invalid_argument("fft_axis: size mismatch");

    const std::size_t m = shape[axis];
    std::size_t stride = 1;
    for (std::size_t a = axis + 1; a < dim; ++a) stride *= shape[a];
    const std::size_t block = stride * m;

    std::vector<std::complex<double>> line(m);
    for (std::size_t base = 0; base < total; base += block) {
        for (std::size_t off = 0; off < stride; ++off) {
            std::complex<double>* p = data.data() + base + off;
            for (std::size_t k = 0; k < m; ++k) line[k] = p[k * stride];
            fft_pow2(line.data(), m, sign);
            for (std::size_t k = 0; k < m; ++k) p[k * stride] = line[k];
        }
    }
}

void fft_nd(std::vector<std::complex<double>>& data,
            const std::vector<std::size_t>& shape, int sign) {
    for (std::size_t a = 0; a < shape.size(); ++a) fft_axis(data, shape, a, sign);
}

} // namespace fracfield
