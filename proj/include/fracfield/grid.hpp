#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace fracfield {

// Periodic grid on [-L/2, L/2)^dim with M points per axis (M a power of two,
// M >= 8). Index k along an axis has signed lattice coordinate
//   m = k            for k <  M/2
//   m = k - M        for k >= M/2
// so index 0 sits at x = 0; coordinates are x = m*h and frequencies
// xi = 2*pi*m / L with m in [-M/2, M/2).
struct GridSpec {
    int dim = 1;
    int points_per_axis = 8;
    double box_length = 1.0;
    double spacing = 0.125;
};

GridSpec make_grid(int dim, int points_per_axis, double box_length);

std::size_t grid_size(const GridSpec& g);
bool same_grid(const GridSpec& a, const GridSpec& b);

inline int signed_index(int k, int m) { return k < m / 2 ? k : k - m; }

// Real scalar field sampled on the grid, row-major over axes.
struct Field {
    GridSpec grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const GridSpec& g);
    Field(const GridSpec& g, std::vector<double> vals);
};

// Trig-interpolant coefficients c_m of a field:
//   u(x) = sum_m c_m exp(i xi_m . x),   c_m = M^{-dim} sum_i u_i exp(-i xi_m . x_i).
// Stored row-major with the same wrapped index layout as Field.
// Real fields give Hermitian-symmetric coefficients: c_{-m} = conj(c_m).
struct SpectralField {
    GridSpec grid;
    std::vector<std::complex<double>> coeffs;
};

SpectralField to_spectral(const Field& u);
Field to_field(const SpectralField& su);

// h^dim * sum(values), compensated summation. Exact rectangle rule on the
// torus; spectrally accurate for smooth periodic integrands.
double integrate(const Field& u);

// (integrate |u|^p)^{1/p}, p >= 1.
double lp_norm(const Field& u, double p);

// Parseval-normalized l2 norm of the coefficients: sqrt(L^dim sum |c_m|^2).
double spectral_l2_norm(const SpectralField& su);

// Compensated (Kahan) accumulator; keeps integrals reproducible and
// independent of value layout to ~machine epsilon.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

// Iteration over multi-indices of an M^dim tensor.
struct MultiIndex {
    int dim;
    int m;
    int idx[3] = {0, 0, 0};
    explicit MultiIndex(const GridSpec& g) : dim(g.dim), m(g.points_per_axis) {}
    bool next() {
        for (int a = dim - 1; a >= 0; --a) {
            if (++idx[a] < m) return true;
            idx[a] = 0;
        }
        return false;
    }
};

// Coordinate / frequency helpers for a flat row-major index.
void unflatten(const GridSpec& g, std::size_t flat, int out_idx[3]);
std::size_t flatten(const GridSpec& g, const int idx[3]);
double coord_component(const GridSpec& g, int k);
double freq_component(const GridSpec& g, int k);
double freq_norm_sq(const GridSpec& g, const int idx[3]);

} // namespace fracfield
