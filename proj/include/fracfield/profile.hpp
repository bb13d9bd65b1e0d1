#pragma once

#include "fracfield/fractional.hpp"
#include "fracfield/grid.hpp"
#include "fracfield/group.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fracfield {

enum class ProfileClass { N0, Nplus, Nminus };

const char* profile_class_name(ProfileClass c);

// A profile w carried along a sequence of group elements d_{y_k, j_k}.
struct PlantedProfile {
    Field w;
    std::vector<GroupElement> elements;
    ProfileClass cls = ProfileClass::N0;
};

// Validates the class against the j-sequence (N0: j == 0; Nplus: strictly
// increasing; Nminus: strictly decreasing) and that all elements share gamma.
PlantedProfile make_planted(Field w, std::vector<GroupElement> elements, ProfileClass cls);

// u_k = sum_n apply(d_k^{(n)}, w^{(n)}) + noise_k with fixed-seed band-limited
// noise of L^{crit} norm noise_amp[k]. K = noise_amp.size().
std::vector<Field> synthesize(const std::vector<PlantedProfile>& profiles,
                              const std::vector<double>& noise_amp, const GridSpec& grid,
                              const FracParams& p, std::uint64_t seed = 2024);

struct MassLocation {
    int level = 0;              // j
    std::vector<double> shift;  // y, snapped to the grid lattice
    double mass = 0.0;          // max unit-cube L^2 mass of the level-j pull-back
};

// Over candidate levels j, pull back by delta_{-j} and scan unit lattice cubes
// for local L^2 mass; returns the best (j, y, mass).
MassLocation locate_mass(const Field& u, double gamma, int j_lo, int j_hi, const FracParams& p);

struct ExtractConfig {
    double tol = 1e-3;     // final-index remainder L^{crit} threshold
    int max_profiles = 8;
    int tail = 3;          // pulled-back residuals averaged for the weak-limit estimate
};

enum class ExtractStatus { Completed, MaxProfiles, Stalled };

struct ExtractedProfile {
    Field w;
    std::vector<GroupElement> elements;
    ProfileClass cls = ProfileClass::N0;
};

struct DecompositionReport {
    std::vector<ExtractedProfile> profiles;
    double norm_budget_sum = 0.0;     // sum_n ||w^(n)||^2
    double norm_budget_limsup = 0.0;  // max_k ||u_k||^2
    // separations[pair][k] for pairs (0,1), (0,2), (1,2), ...
    std::vector<std::vector<double>> separations;
    std::vector<double> remainder_crit_norms;      // per k, at exit
    std::vector<double> final_residual_history;    // final-index norm before/after each pass
    ExtractStatus status = ExtractStatus::Completed;
    std::string diagnostic;
};

// Iterative profile extraction: locate mass per index, pull back by the
// inverse element, tail-average on a centered window of side L/4 to estimate
// the weak limit, subtract the pushed-forward estimate everywhere. A pass that
// fails to reduce the final-index remainder by 1% is reverted and reported as
// stalled (suspected non-separated profiles).
DecompositionReport extract(const std::vector<Field>& seq, double gamma,
                            const ExtractConfig& cfg, const FracParams& p);

struct CocompactnessIndicator {
    std::vector<double> sup_local_mass;
    std::vector<double> crit_norm;
};

// Per index: supremal cube-localized mass over representable levels alongside
// the L^{crit} norm; the two sequences trend together (cocompactness).
CocompactnessIndicator cocompactness_indicator(const std::vector<Field>& seq, double gamma,
                                               const FracParams& p);

} // namespace fracfield
