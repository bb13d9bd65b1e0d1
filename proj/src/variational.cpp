#include "fracfield/variational.hpp"

#include "fracfield/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace fracfield {

namespace {

// Per-solve context: cached |xi|^{2s} multipliers and Parseval volume factor.
struct SpectralOps {
    GridSpec grid;
    FracParams p;
    std::vector<double> mult;
    double vol;

    SpectralOps(const GridSpec& g, const FracParams& fp) : grid(g), p(fp) {
        mult.resize(grid_size(g));
        int idx[3];
        MultiIndex it(g);
        std::size_t flat = 0;
        do {
            for (int a = 0; a < g.dim; ++a) idx[a] = it.idx[a];
            double q = freq_norm_sq(g, idx);
            mult[flat++] = q > 0.0 ? std::pow(q, fp.s) : 0.0;
        } while (it.next());
        vol = std::pow(g.box_length, g.dim);
    }

    double norm_sq(const std::vector<std::complex<double>>& c) const {
        KahanSum acc;
        for (std::size_t i = 0; i < c.size(); ++i) acc.add(mult[i] * std::norm(c[i]));
        return acc.sum * vol;
    }
    double inner(const std::vector<std::complex<double>>& a,
                 const std::vector<std::complex<double>>& b) const {
        KahanSum acc;
        for (std::size_t i = 0; i < a.size(); ++i)
            acc.add(mult[i] * (a[i] * std::conj(b[i])).real());
        return acc.sum * vol;
    }
};

Field default_init(const GridSpec& grid) {
    Field u = gaussian_bump(grid, grid.box_length / 10.0);
    return zero_mean(u);
}

void flip_to_nonnegative_peak(Field& u) {
    double peak = 0.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        double a = std::fabs(u.values[i]);
        if (a > peak) {
            peak = a;
            arg = i;
        }
    }
    if (peak > 0.0 && u.values[arg] < 0.0)
        for (auto& v : u.values) v = -v;
}

} // namespace

double energy(const Field& u, const Nonlinearity& nl, const FracParams& p) {
    return 0.5 * dnorm_sq(u, p) - phi(u, nl);
}

Field energy_gradient(const Field& u, const Nonlinearity& nl, const FracParams& p) {
    Field g = zero_mean(u);
    Field pg = phi_gradient(u, nl, p);
    for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] -= pg.values[i];
    return g;
}

double pohozaev_residual(const Field& u, const Nonlinearity& nl, const FracParams& p) {
    return dnorm_sq(u, p) - p.crit * phi(u, nl);
}

double pohozaev_relative(const Field& u, const Nonlinearity& nl, const FracParams& p) {
    const double d2 = dnorm_sq(u, p);
    return (d2 - p.crit * phi(u, nl)) / std::max(d2, 1e-300);
}

double nehari_residual(const Field& u, const Nonlinearity& nl, const FracParams& p) {
    Field fu(u.grid);
    for (std::size_t i = 0; i < u.values.size(); ++i) fu.values[i] = nl.f(u.values[i]) * u.values[i];
    return dnorm_sq(u, p) - integrate(fu);
}

double nehari_relative(const Field& u, const Nonlinearity& nl, const FracParams& p) {
    const double d2 = dnorm_sq(u, p);
    return nehari_residual(u, nl, p) / std::max(d2, 1e-300);
}

double path_energy_from(double u_norm_sq, double phi_u, const FracParams& p, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("path_energy: t must be positive");
    const double n = p.dim;
    return 0.5 * std::pow(t, n - 2.0 * p.s) * u_norm_sq - std::pow(t, n) * phi_u;
}

double path_energy(const Field& u, const Nonlinearity& nl, const FracParams& p, double t) {
    return path_energy_from(dnorm_sq(u, p), phi(u, nl), p, t);
}

PathMax path_max(double u_norm_sq, double phi_u, const FracParams& p) {
    if (!(phi_u > 0.0))
        throw std::domain_error("path_max: Phi(u) must be positive (path not admissible)");
    if (!(u_norm_sq > 0.0)) throw std::domain_error("path_max: ||u||^2 must be positive");
    const double n = p.dim;
    const double ratio = u_norm_sq / (p.crit * phi_u);
    PathMax out;
    out.tstar = std::pow(ratio, 1.0 / (2.0 * p.s));
    out.maxval = 0.5 * std::pow(ratio, (n - 2.0 * p.s) / (2.0 * p.s)) * u_norm_sq -
                 std::pow(ratio, n / (2.0 * p.s)) * phi_u;
    return out;
}

Field prolong(const Field& u) {
    const GridSpec& g = u.grid;
    GridSpec fine = make_grid(g.dim, g.points_per_axis * 2, g.box_length);
    SpectralField su = to_spectral(u);
    SpectralField out;
    out.grid = fine;
    out.coeffs.assign(grid_size(fine), {0.0, 0.0});
    int idx[3], fidx[3];
    MultiIndex it(g);
    std::size_t flat = 0;
    do {
        for (int a = 0; a < g.dim; ++a) {
            idx[a] = it.idx[a];
            int m = signed_index(idx[a], g.points_per_axis);
            fidx[a] = (m + fine.points_per_axis) % fine.points_per_axis;
        }
        out.coeffs[flatten(fine, fidx)] = su.coeffs[flat++];
    } while (it.next());
    return to_field(out);
}

SphereMaxResult maximize_S(double l, const Nonlinearity& nl, const FracParams& p,
                           const GridSpec& grid, const SolverConfig& cfg) {
    if (grid.points_per_axis > 64) {
        GridSpec coarse = make_grid(grid.dim, grid.points_per_axis / 2, grid.box_length);
        SphereMaxResult warm = maximize_S(l, nl, p, coarse, cfg);
        return maximize_S(l, nl, p, grid, cfg, prolong(warm.w));
    }
    return maximize_S(l, nl, p, grid, cfg, default_init(grid));
}

SphereMaxResult maximize_S(double l, const Nonlinearity& nl, const FracParams& p,
                           const GridSpec& grid, const SolverConfig& cfg, const Field& init) {
    if (!(l > 0.0)) throw std::invalid_argument("maximize_S: level l must be positive");
    if (!same_grid(init.grid, grid))
        throw std::invalid_argument("maximize_S: initial field grid mismatch");
    if (cfg.max_iters < 1 || !(cfg.tol > 0.0))
        throw std::invalid_argument("maximize_S: invalid solver config");
    if (!has_positive_primitive(nl))
        throw std::invalid_argument("maximize_S: F admits no positive value (hypothesis f_4')");

    SpectralOps ops(grid, p);
    const std::size_t n = grid_size(grid);

    SpectralField su = to_spectral(zero_mean(init));
    su.coeffs[0] = 0.0;
    double d2 = ops.norm_sq(su.coeffs);
    if (!(d2 > 0.0)) throw std::invalid_argument("maximize_S: initial field has zero seminorm");
    {
        double scale = std::sqrt(l / d2);
        for (auto& c : su.coeffs) c *= scale;
    }
    Field u = to_field(su);
    double value = phi(u, nl);

    SphereMaxResult res;
    double step = cfg.step;
    int it = 0;
    double rel_tan = 0.0;
    bool exhausted = false;

    for (; it < cfg.max_iters; ++it) {
        SpectralField grad = phi_gradient_spectral(u, nl, p);
        const double gnorm = std::sqrt(std::max(ops.norm_sq(grad.coeffs), 0.0));
        const double gu = ops.inner(grad.coeffs, su.coeffs);
        std::vector<std::complex<double>> tang(n);
        for (std::size_t i = 0; i < n; ++i) tang[i] = grad.coeffs[i] - (gu / l) * su.coeffs[i];
        const double tnorm = std::sqrt(std::max(ops.norm_sq(tang), 0.0));
        rel_tan = tnorm / std::max(gnorm, 1e-300);
        if (rel_tan < cfg.tol) {
            res.converged = true;
            break;
        }

        // ascend along the tangential direction, reproject to the sphere
        bool accepted = false;
        double trial_step = step * std::sqrt(l) / std::max(tnorm, 1e-300);
        for (int bt = 0; bt < 40; ++bt) {
            SpectralField strial = su;
            for (std::size_t i = 0; i < n; ++i) strial.coeffs[i] += trial_step * tang[i];
            double td2 = ops.norm_sq(strial.coeffs);
            if (td2 > 0.0) {
                double scale = std::sqrt(l / td2);
                for (auto& c : strial.coeffs) c *= scale;
                Field tu = to_field(strial);
                double tval = phi(tu, nl);
                if (tval > value) {
                    su = std::move(strial);
                    u = std::move(tu);
                    value = tval;
                    step = std::min(step * 1.5, 4.0);
                    accepted = true;
                    break;
                }
            }
            trial_step *= cfg.backtracking;
            step *= cfg.backtracking;
        }
        if (!accepted) {
            exhausted = true;
            break;
        }
    }

    flip_to_nonnegative_peak(u);
    res.w = std::move(u);
    res.value = value;
    res.iterations = it;
    res.tangential_norm = rel_tan;
    res.negative_phi = value <= 0.0;
    // an fp-exhausted line search within a decade of the tolerance is
    // stationarity for all practical purposes; anything else returns the best
    // iterate flagged non-stationary
    if (!res.converged && exhausted && rel_tan < 10.0 * cfg.tol) res.converged = true;
    return res;
}

QuotientMinResult minimize_quotient(const Nonlinearity& nl, const FracParams& p,
                                    const GridSpec& grid, const SolverConfig& cfg) {
    if (grid.points_per_axis > 64) {
        GridSpec coarse = make_grid(grid.dim, grid.points_per_axis / 2, grid.box_length);
        QuotientMinResult warm = minimize_quotient(nl, p, coarse, cfg);
        QuotientMinResult out = minimize_quotient(nl, p, grid, cfg, prolong(warm.w));
        out.restarts += warm.restarts;
        return out;
    }
    return minimize_quotient(nl, p, grid, cfg, default_init(grid));
}

QuotientMinResult minimize_quotient(const Nonlinearity& nl, const FracParams& p,
                                    const GridSpec& grid, const SolverConfig& cfg,
                                    const Field& init) {
    if (cfg.max_iters < 1 || !(cfg.tol > 0.0))
        throw std::invalid_argument("minimize_quotient: invalid solver config");
    if (!has_positive_primitive(nl))
        throw std::invalid_argument("minimize_quotient: F admits no positive value");

    SpectralOps ops(grid, p);
    const std::size_t n = grid_size(grid);
    const double q = (p.dim - 2.0 * p.s) / p.dim;

    QuotientMinResult res;
    Field u0 = init;

    for (int attempt = 0;; ++attempt) {
        SpectralField su = to_spectral(zero_mean(u0));
        su.coeffs[0] = 0.0;
        Field u = to_field(su);
        double d2 = ops.norm_sq(su.coeffs);
        double ph = phi(u, nl);
        if (ph > 0.0 && d2 > 0.0) {
            double r_val = d2 / std::pow(ph, q);
            double step = cfg.step;
            int it = 0;
            double stat = 0.0;
            bool converged = false;
            bool dead = false;

            for (; it < cfg.max_iters; ++it) {
                SpectralField pg = phi_gradient_spectral(u, nl, p);
                // grad R = 2u / Phi^q - q ||u||^2 Phi^{-q-1} grad Phi
                const double c1 = 2.0 / std::pow(ph, q);
                const double c2 = q * d2 / std::pow(ph, q + 1.0);
                std::vector<std::complex<double>> gr(n);
                for (std::size_t i = 0; i < n; ++i)
                    gr[i] = c1 * su.coeffs[i] - c2 * pg.coeffs[i];
                const double gnorm = std::sqrt(std::max(ops.norm_sq(gr), 0.0));
                stat = gnorm * std::sqrt(d2) / r_val;
                if (stat < cfg.tol) {
                    converged = true;
                    break;
                }

                bool accepted = false;
                double trial_step = step * std::sqrt(d2) / std::max(gnorm, 1e-300);
                for (int bt = 0; bt < 40; ++bt) {
                    SpectralField strial = su;
                    for (std::size_t i = 0; i < n; ++i) strial.coeffs[i] -= trial_step * gr[i];
                    Field tu = to_field(strial);
                    double tph = phi(tu, nl);
                    double td2 = ops.norm_sq(strial.coeffs);
                    if (tph > 0.0 && td2 > 0.0) {
                        double tr = td2 / std::pow(tph, q);
                        if (tr < r_val) {
                            su = std::move(strial);
                            u = std::move(tu);
                            d2 = td2;
                            ph = tph;
                            r_val = tr;
                            step = std::min(step * 1.5, 4.0);
                            accepted = true;
                            break;
                        }
                    }
                    trial_step *= cfg.backtracking;
                    step *= cfg.backtracking;
                }
                if (!accepted) {
                    dead = true;
                    break;
                }
            }

            if (!dead || converged || stat < 10.0 * cfg.tol || attempt >= 3) {
                flip_to_nonnegative_peak(u);
                res.w = std::move(u);
                res.inf_I = r_val;
                res.converged = converged || (dead && stat < 10.0 * cfg.tol);
                res.iterations = it;
                res.stationarity = stat;
                return res;
            }
        }
        if (attempt >= 3)
            throw std::runtime_error("minimize_quotient: iterates left {Phi > 0} after 3 restarts");
        ++res.restarts;
        Field noise = random_band_limited_field(grid, cfg.seed + 7919 * (attempt + 1));
        u0 = default_init(grid);
        double bump_l2 = lp_norm(u0, 2.0);
        double noise_l2 = std::max(lp_norm(noise, 2.0), 1e-300);
        for (std::size_t i = 0; i < u0.values.size(); ++i)
            u0.values[i] += 0.2 * bump_l2 / noise_l2 * noise.values[i];
    }
}

namespace {

// mu_eff with  (-Delta)^s w = (1/mu_eff) f(w)  in the weak-pairing sense.
double measured_multiplier(const Field& w, const Nonlinearity& nl, const FracParams& p) {
    Field fw(w.grid);
    for (std::size_t i = 0; i < w.values.size(); ++i) fw.values[i] = nl.f(w.values[i]) * w.values[i];
    const double d2 = dnorm_sq(w, p);
    if (!(d2 > 0.0)) throw std::runtime_error("measured_multiplier: zero seminorm");
    return integrate(fw) / d2;
}

double pde_residual_rel(const Field& w, const Nonlinearity& nl, const FracParams& p, double mu) {
    Field lhs = frac_laplacian(w, p, p.s);
    Field rhs(w.grid);
    for (std::size_t i = 0; i < w.values.size(); ++i) rhs.values[i] = nl.f(w.values[i]) / mu;
    rhs = zero_mean(rhs);  // the seminorm setting lives in the mean-free subspace
    Field diff(w.grid);
    for (std::size_t i = 0; i < w.values.size(); ++i)
        diff.values[i] = lhs.values[i] - rhs.values[i];
    return lp_norm(diff, 2.0) / std::max(lp_norm(lhs, 2.0), 1e-300);
}

} // namespace

GroundState ground_state(const Nonlinearity& nl, const FracParams& p, const GridSpec& grid,
                         const SolverConfig& cfg, GroundStateRoute route) {
    GroundState gs;
    Field w;
    if (route == GroundStateRoute::Quotient) {
        QuotientMinResult qr = minimize_quotient(nl, p, grid, cfg);
        gs.report.infimum_I = qr.inf_I;
        gs.report.converged = qr.converged;
        gs.report.stationarity = qr.stationarity;
        w = std::move(qr.w);
        if (nl.kind == NonlinearityKind::CriticalPower) {
            // restore Phi = 1 by amplitude homogeneity: Phi(c w) = c^{crit} Phi(w)
            double ph = phi(w, nl);
            double c = std::pow(ph, -1.0 / p.crit);
            for (auto& v : w.values) v *= c;
        }
    } else {
        SphereMaxResult s1 = maximize_S(1.0, nl, p, grid, cfg);
        gs.report.S1 = s1.value;
        const double a = (p.dim - 2.0 * p.s) / (2.0 * p.s);
        const double l0 = std::pow(0.5 * p.crit * s1.value, -a);
        gs.report.l0 = l0;
        SphereMaxResult sl0 = maximize_S(l0, nl, p, grid, cfg);
        gs.report.converged = s1.converged && sl0.converged;
        gs.report.stationarity = sl0.tangential_norm;
        w = std::move(sl0.w);
    }

    double mu = measured_multiplier(w, nl, p);
    if (!(mu > 0.0))
        throw std::runtime_error("ground_state: nonpositive multiplier, inconsistent with a maximizer");
    gs.multiplier = mu;
    gs.beta = std::pow(mu, -1.0 / (2.0 * p.s));
    gs.report.beta = gs.beta;
    gs.report.multiplier = mu;

    if (nl.kind == NonlinearityKind::CriticalPower) {
        // amplitude rescaling c^{crit-2} = 1/mu gives the multiplier-1 field
        double c = std::pow(mu, -1.0 / (p.crit - 2.0));
        for (auto& v : w.values) v *= c;
        mu = 1.0;
    }
    gs.pde_residual = pde_residual_rel(w, nl, p, mu);
    gs.report.pde_residual = gs.pde_residual;
    gs.report.pohozaev_residual = pohozaev_relative(w, nl, p);
    gs.report.nehari_residual = nehari_relative(w, nl, p);
    gs.u = std::move(w);
    return gs;
}

LevelsReport levels(const Nonlinearity& nl, const FracParams& p, const GridSpec& grid,
                    const SolverConfig& cfg, const std::vector<double>& extra_levels) {
    LevelsReport rep;
    SphereMaxResult s1 = maximize_S(1.0, nl, p, grid, cfg);
    rep.S1 = s1.value;
    rep.stationarity = s1.tangential_norm;
    rep.converged = s1.converged;
    rep.Sl.emplace_back(1.0, s1.value);
    for (double l : extra_levels) {
        SphereMaxResult sl = maximize_S(l, nl, p, grid, cfg);
        rep.Sl.emplace_back(l, sl.value);
        rep.converged = rep.converged && sl.converged;
    }

    const double a = (p.dim - 2.0 * p.s) / (2.0 * p.s);
    rep.l0 = std::pow(0.5 * p.crit * rep.S1, -a);
    rep.cI = 0.5 * std::pow(p.crit * rep.S1, -a) -
             rep.S1 * std::pow(p.crit * rep.S1, -p.dim / (2.0 * p.s));

    QuotientMinResult qr = minimize_quotient(nl, p, grid, cfg);
    rep.infimum_I = qr.inf_I;
    rep.converged = rep.converged && qr.converged;

    // residual diagnostics at the maximizer of S_{l_0}
    SphereMaxResult sl0 = maximize_S(rep.l0, nl, p, grid, cfg);
    Field w = std::move(sl0.w);
    double mu = measured_multiplier(w, nl, p);
    rep.multiplier = mu;
    rep.beta = mu > 0.0 ? std::pow(mu, -1.0 / (2.0 * p.s)) : 0.0;
    if (nl.kind == NonlinearityKind::CriticalPower && mu > 0.0) {
        double c = std::pow(mu, -1.0 / (p.crit - 2.0));
        for (auto& v : w.values) v *= c;
        mu = 1.0;
    }
    rep.pohozaev_residual = pohozaev_relative(w, nl, p);
    rep.nehari_residual = nehari_relative(w, nl, p);
    rep.pde_residual = mu > 0.0 ? pde_residual_rel(w, nl, p, mu) : 0.0;
    return rep;
}

} // namespace fracfield
