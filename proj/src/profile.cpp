#include "fracfield/profile.hpp"
#include <algorithm>

#include "fracfield/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace fracfield {

const char* profile_class_name(ProfileClass c) {
    switch (c) {
        case ProfileClass::N0: return "N0";
        case ProfileClass::Nplus: return "Nplus";
        case ProfileClass::Nminus: return "Nminus";
    }
    return "?";
}

PlantedProfile make_planted(Field w, std::vector<GroupElement> elements, ProfileClass cls) {
    if (elements.empty()) throw std::invalid_argument("make_planted: element sequence empty");
    const double gamma = elements.front().gamma;
    for (std::size_t k = 0; k < elements.size(); ++k) {
        if (elements[k].gamma != gamma)
            throw std::invalid_argument("make_planted: elements must share gamma");
        if (k > 0) {
            int dj = elements[k].level - elements[k - 1].level;
            switch (cls) {
                case ProfileClass::N0:
                    if (elements[k].level != 0 || elements[k - 1].level != 0)
                        throw std::invalid_argument("make_planted: N0 requires j == 0");
                    break;
                case ProfileClass::Nplus:
                    if (dj <= 0) throw std::invalid_argument("make_planted: Nplus requires strictly increasing j");
                    break;
                case ProfileClass::Nminus:
                    if (dj >= 0) throw std::invalid_argument("make_planted: Nminus requires strictly decreasing j");
                    break;
            }
        } else if (cls == ProfileClass::N0 && elements[k].level != 0) {
            throw std::invalid_argument("make_planted: N0 requires j == 0");
        }
    }
    return {std::move(w), std::move(elements), cls};
}

std::vector<Field> synthesize(const std::vector<PlantedProfile>& profiles,
                              const std::vector<double>& noise_amp, const GridSpec& grid,
                              const FracParams& p, std::uint64_t seed) {
    const std::size_t K = noise_amp.size();
    if (K == 0) throw std::invalid_argument("synthesize: noise_amp determines K and must be nonempty");
    for (const auto& pr : profiles) {
        if (pr.elements.size() < K)
            throw std::invalid_argument("synthesize: profile needs an element per index");
        if (!same_grid(pr.w.grid, grid))
            throw std::invalid_argument("synthesize: profile grid mismatch");
    }
    std::vector<Field> seq;
    seq.reserve(K);
    for (std::size_t k = 0; k < K; ++k) {
        Field u(grid);
        for (const auto& pr : profiles) {
            Field moved = apply(pr.elements[k], pr.w, p);
            for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] += moved.values[i];
        }
        if (noise_amp[k] > 0.0) {
            Field noise = random_band_limited_field(grid, seed + 101 * k);
            double nn = lp_norm(noise, p.crit);
            if (nn > 0.0) {
                double scale = noise_amp[k] / nn;
                for (std::size_t i = 0; i < u.values.size(); ++i)
                    u.values[i] += scale * noise.values[i];
            }
        }
        seq.push_back(std::move(u));
    }
    return seq;
}

namespace {

// Best cube of side `side` (in box coordinates), mass weighted by `weight`,
// plus the u^2 centroid of the winning cube's neighborhood. Change of
// variables turns the unit-cube mass of the pull-back delta_{-j} u into
// gamma^{2 s j} times the mass of u over cubes of side gamma^{-j}, so the scan
// runs over the original field at every level.
struct CubeScan {
    double mass = 0.0;
    double center[3] = {0.0, 0.0, 0.0};
};

CubeScan scan_cubes(const Field& u, double side, double weight) {
    const GridSpec& g = u.grid;
    const double half = 0.5 * g.box_length;
    const int ncube = static_cast<int>(std::ceil(g.box_length / side)) + 2;
    std::size_t total_cubes = 1;
    for (int a = 0; a < g.dim; ++a) total_cubes *= static_cast<std::size_t>(ncube);
    std::vector<double> mass(total_cubes, 0.0);

    // anchor the cube lattice on the strongest cell, so the dominant feature
    // sits mid-cube instead of straddling a boundary
    double anchor[3] = {0.0, 0.0, 0.0};
    {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < u.values.size(); ++i)
            if (std::fabs(u.values[i]) > std::fabs(u.values[arg])) arg = i;
        int aidx[3];
        unflatten(g, arg, aidx);
        for (int a = 0; a < g.dim; ++a) anchor[a] = coord_component(g, aidx[a]);
    }

    const double cellw = std::pow(g.spacing, g.dim) * weight;
    const int mid = ncube / 2;
    int idx[3];
    MultiIndex it(g);
    std::size_t flat = 0;
    do {
        std::size_t cube = 0;
        for (int a = 0; a < g.dim; ++a) {
            idx[a] = it.idx[a];
            double d = coord_component(g, idx[a]) - anchor[a];
            d -= g.box_length * std::round(d / g.box_length);
            int c = mid + static_cast<int>(std::floor(d / side + 0.5));
            if (c < 0) c = 0;
            if (c >= ncube) c = ncube - 1;
            cube = cube * static_cast<std::size_t>(ncube) + static_cast<std::size_t>(c);
        }
        double val = u.values[flat++];
        mass[cube] += val * val * cellw;
    } while (it.next());

    std::size_t best = 0;
    for (std::size_t c = 1; c < mass.size(); ++c)
        if (mass[c] > mass[best]) best = c;

    double best_center[3];
    std::size_t rem = best;
    for (int a = g.dim - 1; a >= 0; --a) {
        double d = (static_cast<double>(static_cast<int>(rem % ncube) - mid)) * side;
        best_center[a] = anchor[a] + d;
        best_center[a] -= g.box_length * std::round(best_center[a] / g.box_length);
        if (best_center[a] < -half) best_center[a] += g.box_length;
        rem /= static_cast<std::size_t>(ncube);
    }

    // refine by the u^2 centroid over a 3-cube neighborhood at this scale
    double wsum = 0.0, cx[3] = {0.0, 0.0, 0.0};
    MultiIndex it2(g);
    flat = 0;
    do {
        bool near = true;
        double x[3];
        for (int a = 0; a < g.dim; ++a) {
            idx[a] = it2.idx[a];
            x[a] = coord_component(g, idx[a]);
            double d = x[a] - best_center[a];
            d -= g.box_length * std::round(d / g.box_length);
            x[a] = best_center[a] + d;
            if (std::fabs(d) > 1.5 * side) near = false;
        }
        if (near) {
            double w2 = u.values[flat] * u.values[flat];
            wsum += w2;
            for (int a = 0; a < g.dim; ++a) cx[a] += w2 * x[a];
        }
        ++flat;
    } while (it2.next());

    CubeScan out;
    out.mass = mass[best];
    for (int a = 0; a < g.dim; ++a)
        out.center[a] = wsum > 0.0 ? cx[a] / wsum : best_center[a];
    return out;
}

} // namespace

MassLocation locate_mass(const Field& u, double gamma, int j_lo, int j_hi, const FracParams& p) {
    if (j_lo > j_hi) throw std::invalid_argument("locate_mass: empty level range");
    if (!(gamma > 1.0)) throw std::invalid_argument("locate_mass: gamma must exceed 1");
    // grid-representable levels: cubes no smaller than two cells, no larger
    // than half the box
    const double lg = std::log(gamma);
    const int hi_cap = static_cast<int>(std::floor(std::log(1.0 / (2.0 * u.grid.spacing)) / lg));
    const int lo_cap = -static_cast<int>(std::floor(std::log(u.grid.box_length / 2.0) / lg));
    j_lo = std::max(j_lo, lo_cap);
    j_hi = std::min(j_hi, hi_cap);

    MassLocation best;
    best.shift.assign(static_cast<std::size_t>(u.grid.dim), 0.0);
    double best_center[3] = {0.0, 0.0, 0.0};
    bool first = true;
    for (int j = j_lo; j <= j_hi; ++j) {
        const double side = std::pow(gamma, -j);
        const double weight = std::pow(gamma, 2.0 * p.s * j);
        CubeScan scan = scan_cubes(u, side, weight);
        if (first || scan.mass > best.mass) {
            first = false;
            best.mass = scan.mass;
            best.level = j;
            for (int a = 0; a < u.grid.dim; ++a) best_center[a] = scan.center[a];
        }
    }
    for (int a = 0; a < u.grid.dim; ++a)
        best.shift[static_cast<std::size_t>(a)] =
            u.grid.spacing * std::round(best_center[a] / u.grid.spacing);
    return best;
}

DecompositionReport extract(const std::vector<Field>& seq, double gamma, const ExtractConfig& cfg,
                            const FracParams& p) {
    const std::size_t K = seq.size();
    if (K < 2 * static_cast<std::size_t>(cfg.tail) || cfg.tail < 1)
        throw std::invalid_argument("extract: need K >= 2 * tail indices");
    const GridSpec grid = seq.front().grid;
    for (const auto& u : seq)
        if (!same_grid(u.grid, grid)) throw std::invalid_argument("extract: mixed grids");

    const int cap = max_level(grid, gamma);
    DecompositionReport rep;
    rep.norm_budget_limsup = 0.0;
    for (const auto& u : seq) rep.norm_budget_limsup = std::max(rep.norm_budget_limsup, dnorm_sq(u, p));

    std::vector<Field> r = seq;
    const double window_half = grid.box_length / 8.0;

    while (true) {
        double cur = lp_norm(r[K - 1], p.crit);
        rep.final_residual_history.push_back(cur);
        if (cur < cfg.tol) {
            rep.status = ExtractStatus::Completed;
            break;
        }
        if (rep.profiles.size() >= static_cast<std::size_t>(cfg.max_profiles)) {
            rep.status = ExtractStatus::MaxProfiles;
            rep.diagnostic = "max_profiles reached with remainder above tol";
            break;
        }

        std::vector<MassLocation> locs(K);
        for (std::size_t k = 0; k < K; ++k) locs[k] = locate_mass(r[k], gamma, -cap, cap, p);

        // classify by the level trend, then canonicalize the level sequence:
        // the cube-capture argmax is nearly flat across adjacent levels, so the
        // raw j_k jitter; the subtraction needs one affine sequence (N0 is
        // pinned to j == 0, matching the decomposition's normalization)
        int dj = locs[K - 1].level - locs[0].level;
        ProfileClass cls = ProfileClass::N0;
        if (dj >= 2)
            cls = ProfileClass::Nplus;
        else if (dj <= -2)
            cls = ProfileClass::Nminus;
        if (cls == ProfileClass::N0) {
            for (std::size_t k = 0; k < K; ++k)
                if (locs[k].level != 0) locs[k] = locate_mass(r[k], gamma, 0, 0, p);
        } else {
            int slope = static_cast<int>(std::lround(static_cast<double>(dj) / (K - 1)));
            if (cls == ProfileClass::Nplus && slope < 1) slope = 1;
            if (cls == ProfileClass::Nminus && slope > -1) slope = -1;
            std::vector<int> intercepts(K);
            for (std::size_t k = 0; k < K; ++k)
                intercepts[k] = locs[k].level - slope * static_cast<int>(k);
            std::sort(intercepts.begin(), intercepts.end());
            const int base = intercepts[K / 2];
            for (std::size_t k = 0; k < K; ++k) {
                int target = base + slope * static_cast<int>(k);
                target = std::max(-cap, std::min(cap, target));
                if (locs[k].level != target) locs[k] = locate_mass(r[k], gamma, target, target, p);
            }
        }

        std::vector<GroupElement> elems;
        elems.reserve(K);
        for (std::size_t k = 0; k < K; ++k)
            elems.push_back(make_element(gamma, locs[k].shift, locs[k].level));

        // weak-limit estimate: window-restricted average of the tail pull-backs
        Field w(grid);
        for (std::size_t k = K - static_cast<std::size_t>(cfg.tail); k < K; ++k) {
            Field pb = apply(inverse(elems[k]), r[k], p);
            for (std::size_t i = 0; i < w.values.size(); ++i) w.values[i] += pb.values[i];
        }
        int idx[3];
        MultiIndex it(grid);
        std::size_t flat = 0;
        do {
            bool inside = true;
            for (int a = 0; a < grid.dim; ++a) {
                idx[a] = it.idx[a];
                if (std::fabs(coord_component(grid, idx[a])) > window_half) inside = false;
            }
            w.values[flat] = inside ? w.values[flat] / cfg.tail : 0.0;
            ++flat;
        } while (it.next());

        std::vector<Field> r_new = r;
        for (std::size_t k = 0; k < K; ++k) {
            Field push = apply(elems[k], w, p);
            for (std::size_t i = 0; i < r_new[k].values.size(); ++i)
                r_new[k].values[i] -= push.values[i];
        }
        double next = lp_norm(r_new[K - 1], p.crit);
        if (!(next <= cur * 0.99)) {
            rep.status = ExtractStatus::Stalled;
            rep.diagnostic = "pass reduced the final remainder by < 1%; suspected non-separated profiles";
            break;
        }
        r = std::move(r_new);
        rep.profiles.push_back({std::move(w), std::move(elems), cls});
    }

    KahanSum budget;
    for (const auto& pr : rep.profiles) budget.add(dnorm_sq(pr.w, p));
    rep.norm_budget_sum = budget.sum;

    for (std::size_t n = 0; n < rep.profiles.size(); ++n)
        for (std::size_t m = n + 1; m < rep.profiles.size(); ++m) {
            std::vector<double> sep(K);
            for (std::size_t k = 0; k < K; ++k)
                sep[k] = separation(rep.profiles[n].elements[k], rep.profiles[m].elements[k]);
            rep.separations.push_back(std::move(sep));
        }

    rep.remainder_crit_norms.resize(K);
    for (std::size_t k = 0; k < K; ++k) rep.remainder_crit_norms[k] = lp_norm(r[k], p.crit);
    return rep;
}

CocompactnessIndicator cocompactness_indicator(const std::vector<Field>& seq, double gamma,
                                               const FracParams& p) {
    CocompactnessIndicator out;
    for (const auto& u : seq) {
        const int cap = max_level(u.grid, gamma);
        MassLocation loc = locate_mass(u, gamma, -cap, cap, p);
        out.sup_local_mass.push_back(loc.mass);
        out.crit_norm.push_back(lp_norm(u, p.crit));
    }
    return out;
}

} // namespace fracfield
