#pragma once

#include "fracfield/fractional.hpp"
#include "fracfield/grid.hpp"

#include <vector>

namespace fracfield {

// Dilation-translation element d_{y,j}: u -> gamma^{(N-2s)/2 j} u(gamma^j (. - y)).
struct GroupElement {
    double gamma = 2.0;
    std::vector<double> shift;  // y, one component per axis
    int level = 0;              // j
};

GroupElement make_element(double gamma, std::vector<double> shift, int level);
GroupElement identity_element(int dim, double gamma = 2.0);

// d_{y,j} o d_{z,l} = d_{y + gamma^{-j} z, j+l}; gammas must agree.
GroupElement compose(const GroupElement& g1, const GroupElement& g2);

// (d_{y,j})^{-1} = d_{-gamma^j y, -j}.
GroupElement inverse(const GroupElement& g);

// Divergence functional of the profile decomposition at one index:
// |j1 - j2| + gamma^{j1} |y1 - y2|.
double separation(const GroupElement& g1, const GroupElement& g2);

// Largest |level| a grid can represent before dilations alias (gamma^|j| <= M/8).
int max_level(const GridSpec& grid, double gamma = 2.0);

// Grid action. Translations wrap periodically (exact cyclic permutation when y
// lies on the lattice). Dilations keep the single copy of the fundamental
// domain: target points whose source argument falls outside [-L/2, L/2)^dim
// are set to zero rather than folded back, so a concentrated profile stays a
// single concentrated profile. Dyadic actions (gamma = 2, lattice y) resolve
// to exact resampling; anything else goes through trig-interpolant evaluation.
// Throws std::domain_error when |level| exceeds max_level.
Field apply(const GroupElement& g, const Field& u, const FracParams& p);

} // namespace fracfield
