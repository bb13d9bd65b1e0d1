#include "fracfield/extension.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace fracfield {

ExtensionGrid make_extension_grid(const GridSpec& base, double y_max, int n_nodes,
                                  double grading) {
    if (n_nodes < 32) throw std::invalid_argument("ExtensionGrid: at least 32 nodes");
    if (!(y_max > 0.0)) throw std::invalid_argument("ExtensionGrid: y_max must be positive");
    if (!(grading >= 1.0)) throw std::invalid_argument("ExtensionGrid: grading must be >= 1");
    ExtensionGrid eg;
    eg.base = base;
    eg.grading = grading;
    eg.y_nodes.resize(static_cast<std::size_t>(n_nodes));
    for (int i = 1; i <= n_nodes; ++i)
        eg.y_nodes[static_cast<std::size_t>(i - 1)] =
            y_max * std::pow(static_cast<double>(i) / n_nodes, grading);
    return eg;
}

ExtensionProfile::ExtensionProfile(double s, double z_max) : s_(s) {
    if (!(s > 0.0) || !(s < 1.0)) throw std::invalid_argument("ExtensionProfile: 0 < s < 1");
    z_low_ = 0.25;
    z_top_ = std::max(z_max, 1.0) + 16.0;  // start margin damps the asymptotic seed error
    step_ = 1.0 / 1024.0;
    const std::size_t n = static_cast<std::size_t>(std::ceil((z_top_ - z_low_) / step_));
    step_ = (z_top_ - z_low_) / static_cast<double>(n);
    logphi_.assign(n + 1, 0.0);
    dlogphi_.assign(n + 1, 0.0);

    // Riccati form: v = phi'/phi solves v' = 1 - v^2 - ((1-2s)/z) v, integrated
    // backward from the K-Bessel asymptotics; w = log phi rides along.
    auto vprime = [s](double z, double v) { return 1.0 - v * v - (1.0 - 2.0 * s) / z * v; };
    double z = z_top_;
    double v = -1.0 + (s - 0.5) / z - (4.0 * s * s - 1.0) / (8.0 * z * z);
    double w = 0.0;
    logphi_[n] = w;
    dlogphi_[n] = v;
    const double h = -step_;
    for (std::size_t i = n; i-- > 0;) {
        // classical RK4 on the pair (v, w)
        double k1v = vprime(z, v), k1w = v;
        double k2v = vprime(z + 0.5 * h, v + 0.5 * h * k1v), k2w = v + 0.5 * h * k1v;
        double k3v = vprime(z + 0.5 * h, v + 0.5 * h * k2v), k3w = v + 0.5 * h * k2v;
        double k4v = vprime(z + h, v + h * k3v), k4w = v + h * k3v;
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        z += h;
        logphi_[i] = w;
        dlogphi_[i] = v;
    }
    // shift so the table maximum (z = z_low) sits at log 1
    const double w0 = logphi_[0];
    for (auto& lw : logphi_) lw -= w0;

    // Frobenius matching at two small-z points fixes the normalization phi(0) = 1.
    auto table_phi = [&](double zz) {
        double t = (zz - z_low_) / step_;
        std::size_t i = static_cast<std::size_t>(t);
        double fr = t - static_cast<double>(i);
        double h01 = fr * fr * (3.0 - 2.0 * fr);
        double h00 = 1.0 - h01;
        double h10 = fr * (1.0 - fr) * (1.0 - fr);
        double h11 = fr * fr * (fr - 1.0);
        double lw = h00 * logphi_[i] + h01 * logphi_[i + 1] +
                    step_ * (h10 * dlogphi_[i] + h11 * dlogphi_[i + 1]);
        return std::exp(lw);
    };
    auto g1 = [s](double zz) {
        double term = 1.0, sum = 1.0;
        for (int k = 0; k < 24; ++k) {
            term *= zz * zz / ((2.0 * k + 2.0) * (2.0 * k + 2.0 - 2.0 * s));
            sum += term;
        }
        return sum;
    };
    auto g2 = [s](double zz) {
        double term = 1.0, sum = 1.0;
        for (int k = 0; k < 24; ++k) {
            term *= zz * zz / ((2.0 * k + 2.0) * (2.0 * k + 2.0 + 2.0 * s));
            sum += term;
        }
        return sum;
    };
    const double z1 = z_low_, z2 = z_low_ + 64.0 * step_;
    const double p1 = table_phi(z1), p2 = table_phi(z2);
    const double a11 = g1(z1), a12 = std::pow(z1, 2.0 * s) * g2(z1);
    const double a21 = g1(z2), a22 = std::pow(z2, 2.0 * s) * g2(z2);
    const double det = a11 * a22 - a12 * a21;
    if (std::fabs(det) < 1e-14)
        throw std::runtime_error("ExtensionProfile: singular Frobenius matching");
    const double A = (p1 * a22 - p2 * a12) / det;
    const double B = (a11 * p2 - a21 * p1) / det;
    if (!(A > 0.0)) throw std::runtime_error("ExtensionProfile: profile normalization failed");
    coef_a_ = 1.0;
    coef_b_ = B / A;
    const double log_a = std::log(A);
    for (auto& lw : logphi_) lw -= log_a;
}

double ExtensionProfile::series(double z) const {
    double term = 1.0, sum1 = 1.0;
    for (int k = 0; k < 24; ++k) {
        term *= z * z / ((2.0 * k + 2.0) * (2.0 * k + 2.0 - 2.0 * s_));
        sum1 += term;
    }
    double term2 = 1.0, sum2 = 1.0;
    for (int k = 0; k < 24; ++k) {
        term2 *= z * z / ((2.0 * k + 2.0) * (2.0 * k + 2.0 + 2.0 * s_));
        sum2 += term2;
    }
    return coef_a_ * sum1 + coef_b_ * std::pow(z, 2.0 * s_) * sum2;
}

double ExtensionProfile::operator()(double z) const {
    if (z < 0.0) throw std::invalid_argument("ExtensionProfile: z must be nonnegative");
    if (z == 0.0) return 1.0;
    if (z < z_low_) return series(z);
    if (z <= z_top_) {
        double t = (z - z_low_) / step_;
        std::size_t i = static_cast<std::size_t>(t);
        if (i + 1 >= logphi_.size()) i = logphi_.size() - 2;
        double fr = t - static_cast<double>(i);
        double h01 = fr * fr * (3.0 - 2.0 * fr);
        double h00 = 1.0 - h01;
        double h10 = fr * (1.0 - fr) * (1.0 - fr);
        double h11 = fr * fr * (fr - 1.0);
        double lw = h00 * logphi_[i] + h01 * logphi_[i + 1] +
                    step_ * (h10 * dlogphi_[i] + h11 * dlogphi_[i + 1]);
        return std::exp(lw);
    }
    // asymptotic continuation; negligible mass lives out here
    double base = std::exp(logphi_.back());
    return base * std::exp(-(z - z_top_)) * std::pow(z / z_top_, s_ - 0.5);
}

double poisson_beta(int dim, double s) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("poisson_beta: dim must be 1, 2 or 3");
    if (!(s > 0.0) || !(s < 1.0)) throw std::invalid_argument("poisson_beta: 0 < s < 1 required");
    const double alpha = 0.5 * (dim + 2.0 * s);

    // 32-point Gauss-Legendre nodes/weights on [-1, 1] (abscissa symmetric)
    static const double xg[16] = {
        0.0483076656877383162, 0.1444719615827964934, 0.2392873622521370745,
        0.3318686022821276498, 0.4213512761306353454, 0.5068999089322293900,
        0.5877157572407623290, 0.6630442669302152010, 0.7321821187402896804,
        0.7944837959679424070, 0.8493676137325699701, 0.8963211557660521240,
        0.9349060759377396892, 0.9647622555875064308, 0.9856115115452683354,
        0.9972638618494815635};
    static const double wg[16] = {
        0.0965400885147278006, 0.0956387200792748594, 0.0938443990808045654,
        0.0911738786957638847, 0.0876520930044038111, 0.0833119242269467552,
        0.0781938957870703065, 0.0723457941088485062, 0.0658222227763618468,
        0.0586840934785355471, 0.0509980592623761762, 0.0428358980222266807,
        0.0342738629130214331, 0.0253920653092620595, 0.0162743947309056706,
        0.0070186100094700966};

    auto integrand = [&](double r) {
        return std::pow(r, dim - 1) * std::pow(1.0 + r * r, -alpha);
    };
    auto panel = [&](double a, double b) {
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        KahanSum acc;
        for (int i = 0; i < 16; ++i) {
            acc.add(wg[i] * integrand(mid - half * xg[i]));
            acc.add(wg[i] * integrand(mid + half * xg[i]));
        }
        return acc.sum * half;
    };
    auto radial = [&](double cutoff) {
        KahanSum acc;
        acc.add(panel(0.0, 1.0));
        for (double a = 1.0; a < cutoff; a *= 2.0) acc.add(panel(a, std::min(2.0 * a, cutoff)));
        // analytic far-field tail: expand (1 + r^-2)^{-alpha}
        double binom = 1.0;
        for (int k = 0; k <= 12; ++k) {
            double expo = 2.0 * s + 2.0 * k;
            acc.add(binom * std::pow(cutoff, -expo) / expo);
            binom *= -(alpha + k) / (k + 1.0);
        }
        return acc.sum;
    };

    const double i1 = radial(64.0);
    const double i2 = radial(128.0);
    if (std::fabs(i1 - i2) > 1e-8 * std::fabs(i2))
        throw std::runtime_error("poisson_beta: radial quadrature did not converge");
    const double sphere = 2.0 * std::pow(M_PI, 0.5 * dim) / gamma_fn(0.5 * dim);
    return 1.0 / (sphere * i2);
}

double poisson_beta(const FracParams& p) { return poisson_beta(p.dim, p.s); }

double kappa(double s) {
    if (!(s > 0.0) || !(s < 1.0)) throw std::invalid_argument("kappa: 0 < s < 1 required");
    return std::pow(2.0, 1.0 - 2.0 * s) * gamma_fn(1.0 - s) / gamma_fn(s);
}

double kappa(const FracParams& p) { return kappa(p.s); }

namespace {

// phi(|xi| y_i) per distinct squared frequency index, cached
class ProfileCache {
public:
    ProfileCache(const FracParams& p, const ExtensionGrid& eg)
        : eg_(eg) {
        const GridSpec& g = eg.base;
        double ximax = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            double x = M_PI * g.points_per_axis / g.box_length;
            ximax += x * x;
        }
        ximax = std::sqrt(ximax);
        profile_ = std::make_unique<ExtensionProfile>(p.s, ximax * eg.y_nodes.back());
    }

    // key: sum of squared signed integer indices (exact per |xi|)
    const std::vector<double>& at(long long key, double xi_norm) {
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        std::vector<double> vals(eg_.y_nodes.size());
        for (std::size_t i = 0; i < vals.size(); ++i)
            vals[i] = (*profile_)(xi_norm * eg_.y_nodes[i]);
        return cache_.emplace(key, std::move(vals)).first->second;
    }

    const ExtensionProfile& profile() const { return *profile_; }

private:
    ExtensionGrid eg_;
    std::unique_ptr<ExtensionProfile> profile_;
    std::map<long long, std::vector<double>> cache_;
};

long long squared_key(const GridSpec& g, const int idx[3]) {
    long long k = 0;
    for (int a = 0; a < g.dim; ++a) {
        long long m = signed_index(idx[a], g.points_per_axis);
        k += m * m;
    }
    return k;
}

} // namespace

ExtensionField extend(const Field& u, const FracParams& p, const ExtensionGrid& eg) {
    if (!same_grid(u.grid, eg.base)) throw std::invalid_argument("extend: grid mismatch");
    ProfileCache cache(p, eg);
    SpectralField su = to_spectral(u);
    const double k0 = 2.0 * M_PI / u.grid.box_length;

    ExtensionField out;
    out.grid = eg;
    out.slices.reserve(eg.y_nodes.size());
    for (std::size_t yi = 0; yi < eg.y_nodes.size(); ++yi) {
        SpectralField layer = su;
        int idx[3];
        MultiIndex it(u.grid);
        std::size_t flat = 0;
        do {
            for (int a = 0; a < u.grid.dim; ++a) idx[a] = it.idx[a];
            long long key = squared_key(u.grid, idx);
            if (key != 0) {
                double xi = k0 * std::sqrt(static_cast<double>(key));
                layer.coeffs[flat] *= cache.at(key, xi)[yi];
            }  // the mean extends as a constant
            ++flat;
        } while (it.next());
        out.slices.push_back(to_field(layer));
    }
    return out;
}

double energy_identity_residual(const Field& u, const FracParams& p, const ExtensionGrid& eg) {
    if (!same_grid(u.grid, eg.base)) throw std::invalid_argument("energy_identity_residual: grid mismatch");
    const double s = p.s;
    const double two_m_2s = 2.0 - 2.0 * s;
    const std::vector<double>& yn = eg.y_nodes;
    const double y1 = yn.front();
    const double y_top = yn.back();

    ProfileCache cache(p, eg);
    SpectralField su = to_spectral(u);
    const double k0 = 2.0 * M_PI / u.grid.box_length;
    const double vol = std::pow(u.grid.box_length, u.grid.dim);

    // weight moments per segment: M0 = int w, M1 = int w * y
    const std::size_t nseg = yn.size() - 1;
    std::vector<double> m0(nseg), m1(nseg), dy(nseg);
    for (std::size_t i = 0; i < nseg; ++i) {
        dy[i] = yn[i + 1] - yn[i];
        m0[i] = (std::pow(yn[i + 1], two_m_2s) - std::pow(yn[i], two_m_2s)) / two_m_2s;
        m1[i] = (std::pow(yn[i + 1], 3.0 - 2.0 * s) - std::pow(yn[i], 3.0 - 2.0 * s)) / (3.0 - 2.0 * s);
    }
    const double m0_strip = std::pow(y1, two_m_2s) / two_m_2s;
    const double m1_strip = std::pow(y1, 3.0 - 2.0 * s) / (3.0 - 2.0 * s);

    KahanSum energy_acc;
    int idx[3];
    MultiIndex it(u.grid);
    std::size_t flat = 0;
    do {
        for (int a = 0; a < u.grid.dim; ++a) idx[a] = it.idx[a];
        long long key = squared_key(u.grid, idx);
        double amp2 = std::norm(su.coeffs[flat]);
        ++flat;
        if (key == 0 || amp2 == 0.0) continue;
        double q = k0 * std::sqrt(static_cast<double>(key));
        const std::vector<double>& ph = cache.at(key, q);

        double mode = 0.0;
        // boundary strip [0, y1]: linear-in-y model for phi^2, constant-flux model for w_y
        {
            double f0 = 1.0, f1 = ph[0] * ph[0];
            mode += q * q * (f0 * m0_strip + (f1 - f0) / y1 * m1_strip);
            double flux0 = 2.0 * s * (ph[0] - 1.0) / std::pow(y1, 2.0 * s);
            mode += flux0 * flux0 * std::pow(y1, 2.0 * s) / (2.0 * s);
        }
        for (std::size_t i = 0; i < nseg; ++i) {
            double f0 = ph[i] * ph[i], f1 = ph[i + 1] * ph[i + 1];
            mode += q * q * (f0 * m0[i] + (f1 - f0) / dy[i] * (m1[i] - yn[i] * m0[i]));
            double d = (ph[i + 1] - ph[i]) / dy[i];
            mode += d * d * m0[i];
        }
        // far tail: phi ~ phi_top exp(-q (y - y_top))
        {
            double ptop = ph.back();
            double tail_moment = std::pow(y_top, 1.0 - 2.0 * s) / (2.0 * q) +
                                 (1.0 - 2.0 * s) * std::pow(y_top, -2.0 * s) / (4.0 * q * q);
            mode += 2.0 * q * q * ptop * ptop * tail_moment;
        }
        energy_acc.add(amp2 * mode);
    } while (it.next());

    const double weighted_energy = energy_acc.sum * vol;
    const double target = kappa(p) * dnorm_sq(su, p);
    return std::fabs(weighted_energy - target) / std::max(target, 1e-300);
}

double neumann_trace_residual(const Field& u, const FracParams& p, const ExtensionGrid& eg) {
    if (!same_grid(u.grid, eg.base)) throw std::invalid_argument("neumann_trace_residual: grid mismatch");
    const std::vector<double>& yn = eg.y_nodes;
    const double s = p.s;
    const double y1 = yn[0], y2 = yn[1];

    ProfileCache cache(p, eg);
    SpectralField su = to_spectral(u);
    const double k0 = 2.0 * M_PI / u.grid.box_length;
    const double ks = kappa(p);

    // The weighted flux y^{1-2s} w_y is d w / d tau with tau = y^{2s} / (2s),
    // smooth in tau down to tau = 0; one-sided differences are taken in tau.
    // The flux correction is O(y^{2-2s}), so the two difference quotients are
    // extrapolated to zero against the tau-averages of y^{2-2s}.
    const double tau1 = std::pow(y1, 2.0 * s) / (2.0 * s);
    const double tau2 = std::pow(y2, 2.0 * s) / (2.0 * s);
    const double kap = (2.0 - 2.0 * s) / (2.0 * s);
    auto t_avg = [&](double tlo, double thi) {
        return std::pow(2.0 * s, kap) * (std::pow(thi, kap + 1.0) - std::pow(tlo, kap + 1.0)) /
               ((kap + 1.0) * (thi - tlo));
    };
    const double ta = t_avg(0.0, tau1), tb = t_avg(tau1, tau2);

    KahanSum num_acc, den_acc;
    int idx[3];
    MultiIndex it(u.grid);
    std::size_t flat = 0;
    do {
        for (int a = 0; a < u.grid.dim; ++a) idx[a] = it.idx[a];
        long long key = squared_key(u.grid, idx);
        double amp2 = std::norm(su.coeffs[flat]);
        ++flat;
        if (key == 0) continue;
        double q = k0 * std::sqrt(static_cast<double>(key));
        const std::vector<double>& ph = cache.at(key, q);

        double flux_a = (ph[0] - 1.0) / tau1;
        double flux_b = (ph[1] - ph[0]) / (tau2 - tau1);
        double flux0 = flux_a - ta * (flux_b - flux_a) / (tb - ta);

        double target = ks * std::pow(q, 2.0 * s);
        double diff = -flux0 - target;
        num_acc.add(amp2 * diff * diff);
        den_acc.add(amp2 * target * target);
    } while (it.next());

    return std::sqrt(num_acc.sum) / std::max(std::sqrt(den_acc.sum), 1e-300);
}

} // namespace fracfield
