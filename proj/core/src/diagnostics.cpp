#include "chemoflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "chemoflow/fluid.hpp"
#include "chemoflow/ops.hpp"

namespace chemoflow {

namespace {
// cell-based gradient energy: mean of squared face gradients per direction
inline double cell_grad_sq(const ScalarField& f, int i, int j, double ihx,
                           double ihy) {
    const Grid& g = f.grid;
    const double ge = (i + 1 < g.nx) ? (f(i + 1, j) - f(i, j)) * ihx : 0.0;
    const double gw = (i > 0) ? (f(i, j) - f(i - 1, j)) * ihx : 0.0;
    const double gn = (j + 1 < g.ny) ? (f(i, j + 1) - f(i, j)) * ihy : 0.0;
    const double gs = (j > 0) ? (f(i, j) - f(i, j - 1)) * ihy : 0.0;
    return 0.5 * (ge * ge + gw * gw) + 0.5 * (gn * gn + gs * gs);
}

template <class Member>
double weighted_gradient_where(const ScalarField& c, double beta, double s1,
                               Member&& inside) {
    if (!(beta > 1.0))
        throw DomainError("weighted gradient: beta must be > 1");
    if (!(s1 + min_value(c) > 0.0))
        throw DomainError("weighted gradient: s1 + c must be positive");
    const Grid& g = c.grid;
    const double ihx = 1.0 / g.hx();
    const double ihy = 1.0 / g.hy();
    const double vol = g.cell_area();
    double s = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!inside(g.xc(i), g.yc(j))) continue;
            const double wgt = std::pow(s1 + c(i, j), -(beta + 1.0));
            s += cell_grad_sq(c, i, j, ihx, ihy) * wgt * vol;
        }
    return s;
}
}  // namespace

double localized_weighted_gradient(const ScalarField& c, double qx, double qy,
                                   double delta, double beta, double s1) {
    const double d2 = delta * delta;
    return weighted_gradient_where(c, beta, s1, [&](double x, double y) {
        const double dx = x - qx, dy = y - qy;
        return dx * dx + dy * dy <= d2;
    });
}

double weighted_gradient_box(const ScalarField& c, double x0, double x1,
                             double y0, double y1, double beta, double s1) {
    return weighted_gradient_where(c, beta, s1, [&](double x, double y) {
        return x >= x0 && x < x1 && y >= y0 && y < y1;
    });
}

double weighted_gradient_total(const ScalarField& c, double beta, double s1) {
    return weighted_gradient_where(c, beta, s1,
                                   [](double, double) { return true; });
}

std::vector<ModulusPoint> gradient_modulus(const ScalarField& c,
                                           const std::vector<double>& deltas,
                                           double beta, double s1,
                                           int lattice_n) {
    if (lattice_n < 1) throw DomainError("gradient_modulus: lattice_n >= 1");
    const Grid& g = c.grid;
    std::vector<ModulusPoint> out;
    out.reserve(deltas.size());
    for (double delta : deltas) {
        double sup = 0.0;
        for (int qj = 0; qj < lattice_n; ++qj)
            for (int qi = 0; qi < lattice_n; ++qi) {
                const double qx = (qi + 0.5) * g.lx / lattice_n;
                const double qy = (qj + 0.5) * g.ly / lattice_n;
                sup = std::max(
                    sup, localized_weighted_gradient(c, qx, qy, delta, beta, s1));
            }
        out.push_back({delta, sup});
    }
    return out;
}

DiagnosticsRecord record(const State& s, const SimConfig& cfg) {
    const Grid& g = s.n.grid;
    const double vol = g.cell_area();
    const double ihx = 1.0 / g.hx();
    const double ihy = 1.0 / g.hy();

    DiagnosticsRecord r;
    r.t = s.t;
    r.mass = integrate(s.n);
    r.l2_n = l2_norm(s.n);
    r.l3_n = lp_norm(s.n, 3.0);
    r.linf_n = linf_norm(s.n);

    const double einv = std::exp(-1.0);
    double ent = 0.0, nlog = 0.0;
    for (double x : s.n.v) {
        ent += (x > 0.0 ? x * std::log(x) : 0.0) + einv;
        nlog += x * std::log1p(x);
    }
    r.entropy = ent * vol;
    r.n_log_n1 = nlog * vol;

    {
        ScalarField ln1(g);
        for (std::size_t k = 0; k < ln1.v.size(); ++k)
            ln1.v[k] = std::log1p(s.n.v[k]);
        r.grad_log_n1_sq = dirichlet_energy(ln1);
    }

    r.kinetic = integral_abs2(s.u);
    r.enstrophy = enstrophy(s.u);

    r.min_c = min_value(s.c);
    r.c_w1inf = std::max(max_abs(s.c), max_grad(s.c));

    r.weighted_grad.reserve(cfg.wgrad_betas.size());
    for (double beta : cfg.wgrad_betas)
        r.weighted_grad.push_back(weighted_gradient_total(s.c, beta, cfg.s1));

    // deviations against the conserved mass mean
    const double nbar0 = mean(s.n);
    {
        ScalarField ct(g);
        for (std::size_t k = 0; k < ct.v.size(); ++k) ct.v[k] = s.c.v[k] - nbar0;
        double c2 = 0.0;
        for (double x : ct.v) c2 += x * x;
        r.lyapunov = c2 * vol + dirichlet_energy(ct);
        r.dev_c_h1 = std::sqrt(std::max(0.0, r.lyapunov));
        r.dev_c_w1inf = std::max(max_abs(ct), max_grad(ct));
    }
    {
        double d2 = 0.0, dinf = 0.0;
        for (double x : s.n.v) {
            const double d = x - nbar0;
            d2 += d * d;
            dinf = std::max(dinf, std::abs(d));
        }
        r.dev_n_l2 = std::sqrt(d2 * vol);
        r.dev_n_linf = dinf;
    }

    (void)ihx;
    (void)ihy;
    return r;
}

DecayFit decay_rate(const std::vector<std::pair<double, double>>& series,
                    double window) {
    if (!(window > 0.0 && window <= 1.0))
        throw DomainError("decay_rate: window must lie in (0,1]");
    if (series.size() < 2)
        throw DomainError("decay_rate: need at least two samples");

    const double t0 = series.front().first, t1 = series.back().first;
    const double cut = t1 - window * (t1 - t0);
    std::vector<double> ts, ls;
    for (const auto& [t, y] : series) {
        if (t < cut) continue;
        if (!(y > 0.0))
            throw DomainError("decay_rate: nonpositive value in fit window");
        ts.push_back(t);
        ls.push_back(std::log(y));
    }
    if (ts.size() < 2) throw DomainError("decay_rate: fit window too small");

    const std::size_t m = ts.size();
    double st = 0.0, sl = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        st += ts[k];
        sl += ls[k];
    }
    const double tbar = st / m, lbar = sl / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double dx = ts[k] - tbar, dy = ls[k] - lbar;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    DecayFit fit;
    fit.points = int(m);
    if (sxx == 0.0) throw DomainError("decay_rate: degenerate time axis");
    const double slope = sxy / sxx;
    fit.lambda = -slope;
    if (syy == 0.0) {
        fit.r_squared = 1.0;  // constant series: perfect (flat) fit
    } else {
        const double ssres = syy - slope * sxy;
        fit.r_squared = std::max(0.0, 1.0 - ssres / syy);
    }
    return fit;
}

double mu1_rectangle(double lx, double ly) {
    if (!(lx > 0.0) || !(ly > 0.0))
        throw DomainError("mu1_rectangle: box lengths must be positive");
    const double lmax = std::max(lx, ly);
    return (M_PI / lmax) * (M_PI / lmax);
}

double s_star(double gamma, double mass, double mu1, double c_omega) {
    if (!(gamma >= 1.0))
        throw DomainError("s_star: decay power must be >= 1");
    if (!(mass > 0.0) || !(mu1 > 0.0) || !(c_omega > 0.0))
        throw DomainError("s_star: mass, mu1, c_omega must be positive");
    const double kappa = (7.0 + 4.0 * std::sqrt(2.0)) / (9.0 + 4.0 * std::sqrt(2.0));
    const double head = (1.0 + 1.0 / mu1) / (kappa / gamma + 1.0 / mu1);
    return head * std::pow(mass / c_omega, gamma - 1.0);
}

double holder_seminorm(const std::vector<std::pair<double, ScalarField>>& history,
                       double theta, long max_pairs, unsigned long long seed) {
    if (!(theta > 0.0 && theta < 1.0))
        throw DomainError("holder_seminorm: theta must lie in (0,1)");
    if (history.size() < 2)
        throw DomainError("holder_seminorm: need at least two snapshots");

    const Grid& g = history.front().second.grid;
    for (const auto& h : history)
        require_same_grid(g, h.second.grid, "holder_seminorm");

    const long nf = long(history.size());
    const long nc = long(g.ncells());
    const long npts = nf * nc;

    auto value = [&](long a) -> double {
        return history[std::size_t(a / nc)].second.v[std::size_t(a % nc)];
    };
    auto coords = [&](long a, double& x, double& y, double& t) {
        const long f = a / nc, cell = a % nc;
        const int i = int(cell % g.nx), j = int(cell / g.nx);
        x = g.xc(i);
        y = g.yc(j);
        t = history[std::size_t(f)].first;
    };
    auto ratio = [&](long a, long b) -> double {
        double xa, ya, ta, xb, yb, tb;
        coords(a, xa, ya, ta);
        coords(b, xb, yb, tb);
        const double dist = std::hypot(xa - xb, ya - yb);
        const double denom =
            std::pow(dist, theta) + std::pow(std::abs(ta - tb), 0.5 * theta);
        if (denom == 0.0) return 0.0;
        return std::abs(value(a) - value(b)) / denom;
    };

    double best = 0.0;
    const double total_pairs = 0.5 * double(npts) * double(npts - 1);
    if (total_pairs <= double(max_pairs) || npts <= 2 * 32 * 32) {
        // exhaustive
        for (long a = 0; a < npts; ++a)
            for (long b = a + 1; b < npts; ++b) best = std::max(best, ratio(a, b));
        return best;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> pick(0, npts - 1);
    for (long k = 0; k < max_pairs; ++k) {
        const long a = pick(rng), b = pick(rng);
        if (a == b) continue;
        best = std::max(best, ratio(a, b));
    }
    return best;
}

double localized_entropy(const ScalarField& n, const ScalarField& phi) {
    require_same_grid(n.grid, phi.grid, "localized_entropy");
    const double einv = std::exp(-1.0);
    double s = 0.0;
    for (std::size_t k = 0; k < n.v.size(); ++k) {
        const double x = n.v[k];
        const double p2 = phi.v[k] * phi.v[k];
        s += ((x > 0.0 ? x * std::log(x) : 0.0) + einv) * p2 * p2;
    }
    return s * n.grid.cell_area();
}

}  // namespace chemoflow
