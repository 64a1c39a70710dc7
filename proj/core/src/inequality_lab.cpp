#include "chemoflow/inequality_lab.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "chemoflow/cutoff.hpp"
#include "chemoflow/errors.hpp"
#include "chemoflow/ops.hpp"

namespace chemoflow {

namespace {

constexpr double kRelTol = 1e-9;  // slack granted for roundoff only

inline bool leq_tol(double lhs, double rhs) {
    return lhs <= rhs + kRelTol * std::max(1.0, std::abs(rhs));
}

// cell-centered |grad f|^2 as the mean of squared one-sided face gradients
// (the same quadrature the diagnostics use, so reports agree across modules)
inline double cell_grad_sq(const ScalarField& f, int i, int j) {
    const Grid& g = f.grid;
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    const double ge = (i + 1 < g.nx) ? (f(i + 1, j) - f(i, j)) * ihx : 0.0;
    const double gw = (i > 0) ? (f(i, j) - f(i - 1, j)) * ihx : 0.0;
    const double gn = (j + 1 < g.ny) ? (f(i, j + 1) - f(i, j)) * ihy : 0.0;
    const double gs = (j > 0) ? (f(i, j) - f(i, j - 1)) * ihy : 0.0;
    return 0.5 * (ge * ge + gw * gw) + 0.5 * (gn * gn + gs * gs);
}

// clamped lookup = reflected ghost cells (zero wall-normal derivative)
inline double at_refl(const ScalarField& f, int i, int j) {
    const int ii = std::clamp(i, 0, f.grid.nx - 1);
    const int jj = std::clamp(j, 0, f.grid.ny - 1);
    return f(ii, jj);
}

struct Hess {
    double xx, xy, yy;
    double norm_sq() const { return xx * xx + 2.0 * xy * xy + yy * yy; }
};

inline Hess hessian_refl(const ScalarField& f, int i, int j) {
    const double hx = f.grid.hx(), hy = f.grid.hy();
    Hess h;
    h.xx = (at_refl(f, i + 1, j) - 2.0 * f(i, j) + at_refl(f, i - 1, j)) /
           (hx * hx);
    h.yy = (at_refl(f, i, j + 1) - 2.0 * f(i, j) + at_refl(f, i, j - 1)) /
           (hy * hy);
    h.xy = (at_refl(f, i + 1, j + 1) - at_refl(f, i + 1, j - 1) -
            at_refl(f, i - 1, j + 1) + at_refl(f, i - 1, j - 1)) /
           (4.0 * hx * hy);
    return h;
}

inline double grad_sq_refl(const ScalarField& f, int i, int j) {
    const double hx = f.grid.hx(), hy = f.grid.hy();
    const double fx = (at_refl(f, i + 1, j) - at_refl(f, i - 1, j)) / (2.0 * hx);
    const double fy = (at_refl(f, i, j + 1) - at_refl(f, i, j - 1)) / (2.0 * hy);
    return fx * fx + fy * fy;
}

}  // namespace

// ============================================================================
// Entropy / gradient bound
// ============================================================================

TmReport check_trudinger_moser(const ScalarField& f, const ScalarField& g,
                               double a, double lambda, double C) {
    require_same_grid(f.grid, g.grid, "check_trudinger_moser");
    if (!(a > 0.0) || !(lambda > 0.0))
        throw DomainError("check_trudinger_moser: a and lambda must be positive");
    if (min_value(f) < 0.0)
        throw DomainError("check_trudinger_moser: f must be nonnegative");

    const double vol = f.grid.cell_area();
    const double intf = integrate(f);
    if (!(intf > 0.0))
        throw DomainError("check_trudinger_moser: f must not vanish identically");
    const double fbar = intf / (f.grid.lx * f.grid.ly);

    double lhs = 0.0, ent = 0.0, absg = 0.0;
    for (std::size_t kk = 0; kk < f.v.size(); ++kk) {
        const double fv = f.v[kk], gv = g.v[kk];
        lhs += fv * std::abs(gv);
        if (fv > 0.0) ent += fv * std::log(fv / fbar);
        absg += std::abs(gv);
    }
    lhs *= vol;
    ent *= vol;
    absg *= vol;

    const double dird = dirichlet_energy(g);
    const double base = ent / a + (1.0 + lambda) * a / (8.0 * M_PI) * intf * dird;
    const double cterm = a * intf * absg * absg + intf / a;

    TmReport rep;
    rep.lhs = lhs;
    rep.rhs = base + C * cterm;
    rep.minimal_C = std::max(0.0, (lhs - base) / cterm);
    rep.satisfied = leq_tol(lhs, rep.rhs);
    return rep;
}

// ============================================================================
// Power-norm bound with logarithmic improvement
// ============================================================================

LnimprReport check_lnimpr(const ScalarField& f, double p, double s, double eps,
                          double C) {
    if (!(p >= 1.0)) throw DomainError("check_lnimpr: p must be >= 1");
    if (!(s > 1.0)) throw DomainError("check_lnimpr: s must be > 1");
    if (!(eps > 0.0)) throw DomainError("check_lnimpr: eps must be positive");
    if (min_value(f) < 0.0)
        throw DomainError("check_lnimpr: f must be nonnegative");

    const Grid& g = f.grid;
    const double vol = g.cell_area();
    const double area = g.lx * g.ly;
    const double einv = std::exp(-1.0);

    double lhs = 0.0, ent = 0.0, gradterm = 0.0, iq = 0.0;
    const double e2 = 0.5 * eps * (p + 1.0) / (1.0 + eps);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double fv = f(i, j);
            lhs += std::pow(fv, p + 1.0);
            ent += (fv > 0.0 ? fv * std::log(fv) : 0.0) + einv;
            const double gs = cell_grad_sq(f, i, j);
            if (gs > 0.0) gradterm += std::pow(fv, p - 2.0) * gs;
            iq += std::pow(fv, e2);
        }
    lhs *= vol;
    ent *= vol;
    gradterm *= vol;
    iq *= vol;

    const double k1 = (p + 1.0) * (p + 1.0) / std::log(s) * ent * gradterm;
    const double term3 = 6.0 * std::pow(s, p + 1.0) * area;
    const double iq_pow = std::pow(iq, 2.0 * (1.0 + eps) / eps);
    auto rhs_of = [&](double cc) {
        return cc * k1 + std::pow(4.0 * cc, 1.0 + 0.5 * eps) * iq_pow + term3;
    };

    LnimprReport rep;
    rep.lhs = lhs;
    rep.rhs = rhs_of(C);
    rep.satisfied = leq_tol(lhs, rep.rhs);

    if (rhs_of(0.0) >= lhs) {
        rep.minimal_C = 0.0;
    } else {
        double hi = 1.0;
        int guard = 0;
        while (rhs_of(hi) < lhs && guard++ < 200) hi *= 2.0;
        double lo = 0.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (rhs_of(mid) >= lhs ? hi : lo) = mid;
        }
        rep.minimal_C = hi;
    }
    return rep;
}

// ============================================================================
// Sup-norm interpolation
// ============================================================================

double rectangle_corner_area(double lx, double ly, double r) {
    if (!(lx > 0.0) || !(ly > 0.0) || !(r > 0.0))
        throw DomainError("rectangle_corner_area: arguments must be positive");
    auto seg = [&](double a) -> double {
        if (r <= a) return 0.0;
        return 0.5 * (r * r * std::acos(a / r) - a * std::sqrt(r * r - a * a));
    };
    return 0.25 * M_PI * r * r - seg(lx) - seg(ly);
}

double rectangle_cone_constant(double lx, double ly, double p) {
    if (!(p >= 1.0)) throw DomainError("rectangle_cone_constant: p must be >= 1");
    const double diag = std::hypot(lx, ly);
    double worst = 4.0 / M_PI;  // small-r limit (quarter disc fits the corner)
    const int nr = 20000;
    for (int i = 1; i <= nr; ++i) {
        const double r = diag * double(i) / double(nr);
        worst = std::max(worst, r * r / rectangle_corner_area(lx, ly, r));
    }
    return std::pow(worst, 1.0 / p);
}

namespace {
double holder_seminorm_static(const ScalarField& f, double theta,
                              long max_pairs, unsigned long long seed) {
    const Grid& g = f.grid;
    const long n = long(g.ncells());
    auto ratio = [&](long a, long b) -> double {
        const int ia = int(a % g.nx), ja = int(a / g.nx);
        const int ib = int(b % g.nx), jb = int(b / g.nx);
        const double dist = std::hypot(g.xc(ia) - g.xc(ib), g.yc(ja) - g.yc(jb));
        if (dist == 0.0) return 0.0;
        return std::abs(f.v[std::size_t(a)] - f.v[std::size_t(b)]) /
               std::pow(dist, theta);
    };
    double best = 0.0;
    if (n <= 32 * 32) {
        for (long a = 0; a < n; ++a)
            for (long b = a + 1; b < n; ++b) best = std::max(best, ratio(a, b));
        return best;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> pick(0, n - 1);
    for (long k = 0; k < max_pairs; ++k) {
        const long a = pick(rng), b = pick(rng);
        if (a == b) continue;
        best = std::max(best, ratio(a, b));
    }
    return best;
}
}  // namespace

InterpolationReport check_interpolation(const ScalarField& f, double theta,
                                        double p, double cone_constant,
                                        long max_pairs,
                                        unsigned long long seed) {
    if (!(theta > 0.0 && theta < 1.0))
        throw DomainError("check_interpolation: theta must lie in (0,1)");
    if (!(p >= 1.0)) throw DomainError("check_interpolation: p must be >= 1");
    if (!(cone_constant > 0.0))
        throw DomainError("check_interpolation: cone constant must be positive");

    const Grid& g = f.grid;
    const double d = 2.0;
    const double r0 = g.diameter();
    const double area = g.lx * g.ly;

    InterpolationReport rep;
    rep.seminorm = holder_seminorm_static(f, theta, max_pairs, seed);
    rep.lp = lp_norm(f, p);
    rep.linf = linf_norm(f);

    const double sem_floor = 1e-13 * std::max(1.0, rep.linf);
    if (rep.seminorm <= sem_floor) {
        // constant field: the averaging step is an identity
        rep.r_star = r0;
        rep.bound_value = std::pow(area, -1.0 / p) * rep.lp;
    } else {
        const double rstar = std::pow(
            d * cone_constant * rep.lp / (p * theta * rep.seminorm),
            p / (p * theta + d));
        rep.r_star = std::min(rstar, r0);
        rep.bound_value =
            rep.seminorm * std::pow(rep.r_star, theta) +
            cone_constant * std::pow(rep.r_star, -d / p) * rep.lp;
    }
    rep.margin = rep.bound_value - rep.linf;
    rep.pointwise_ok = leq_tol(rep.linf, rep.bound_value);
    return rep;
}

// ============================================================================
// Spectral-gap ratios
// ============================================================================

double mu1_discrete(const Grid& g) {
    const double ex =
        2.0 / (g.hx() * g.hx()) * (1.0 - std::cos(M_PI / double(g.nx)));
    const double ey =
        2.0 / (g.hy() * g.hy()) * (1.0 - std::cos(M_PI / double(g.ny)));
    return std::min(ex, ey);
}

PoincareReport check_poincare(const ScalarField& f) {
    const Grid& g = f.grid;
    const double scale = std::max(1.0, linf_norm(f));
    const double mn = mean(f);
    if (std::abs(mn) > 1e-12 * scale)
        throw DomainError("check_poincare: field must have zero mean");

    ScalarField fc(g);
    for (std::size_t k = 0; k < fc.v.size(); ++k) fc.v[k] = f.v[k] - mn;

    const double vol = g.cell_area();
    double m2 = 0.0;
    for (double x : fc.v) m2 += x * x;
    m2 *= vol;

    const double e2 = dirichlet_energy(fc);
    const ScalarField lap = laplacian_neumann(fc);
    double l2 = 0.0;
    for (double x : lap.v) l2 += x * x;
    l2 *= vol;

    PoincareReport rep;
    rep.mu1_discrete = mu1_discrete(g);
    rep.ratio1 = (e2 > 0.0) ? rep.mu1_discrete * m2 / e2 : 0.0;
    rep.ratio2 = (l2 > 0.0) ? rep.mu1_discrete * e2 / l2 : 0.0;
    rep.satisfied = rep.ratio1 <= 1.0 + 1e-8 && rep.ratio2 <= 1.0 + 1e-8;
    return rep;
}

// ============================================================================
// Fourth-power gradient vs. weighted Hessian
// ============================================================================

CrucialReport check_crucial(const ScalarField& f, double gamma, double k,
                            double delta) {
    if (!(gamma > 0.0))
        throw DomainError("check_crucial: decay power must be positive");
    if (!(delta > 0.0)) throw DomainError("check_crucial: delta must be positive");
    if (!(min_value(f) > 0.0))
        throw DomainError("check_crucial: f must be strictly positive");

    const Grid& g = f.grid;
    const double vol = g.cell_area();
    const double d = 2.0;

    ScalarField theta(g);
    if (gamma == 1.0) {
        for (std::size_t q = 0; q < theta.v.size(); ++q)
            theta.v[q] = std::log(f.v[q]);
    } else {
        for (std::size_t q = 0; q < theta.v.size(); ++q)
            theta.v[q] =
                (std::pow(f.v[q], 1.0 - gamma) - 1.0) / (1.0 - gamma);
    }

    double lhs1 = 0.0, ith = 0.0, ilog = 0.0, lhs2 = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double fv = f(i, j);
            const double hp = gamma * std::pow(fv, gamma - 1.0);
            const double gs = grad_sq_refl(f, i, j);
            lhs1 += hp * std::pow(fv, -gamma * k) * gs * gs;

            const double hth = hessian_refl(theta, i, j).norm_sq();
            ith += std::pow(fv, gamma * (4.0 - k)) / hp * hth;
            if (k == 4.0) {
                const double lh = gamma * std::log(fv);
                ilog += lh * lh / hp * hth;
            }
            lhs2 += std::pow(fv, gamma * (2.0 - k)) / hp *
                    hessian_refl(f, i, j).norm_sq();
        }
    lhs1 *= vol;
    ith *= vol;
    ilog *= vol;
    lhs2 *= vol;

    CrucialReport rep;
    rep.lhs1 = lhs1;
    rep.lhs2 = lhs2;
    if (k == 4.0) {
        rep.constant1 = (2.0 + std::sqrt(d)) * (2.0 + std::sqrt(d));
        rep.rhs1 = rep.constant1 * ilog;
    } else {
        const double c = (2.0 + std::sqrt(d)) / (4.0 - k);
        rep.constant1 = c * c;
        rep.rhs1 = rep.constant1 * ith;
    }
    rep.rhs2 = (delta + 1.0) / delta * lhs1 + (1.0 + delta) * ith;
    rep.satisfied = leq_tol(rep.lhs1, rep.rhs1) && leq_tol(rep.lhs2, rep.rhs2);
    return rep;
}

// ============================================================================
// psi_eta norm table
// ============================================================================

double gamma3_upper(double x) {
    return (x * x + 2.0 * x + 2.0) * std::exp(-x);
}

std::vector<PsiNormRow> psi_eta_norm_table(const std::vector<double>& etas) {
    std::vector<PsiNormRow> rows;
    rows.reserve(etas.size());
    const double emax = std::exp(-1.0);
    for (double eta : etas) {
        if (!(eta > 0.0 && eta < emax))
            throw DomainError("psi_eta_norm_table: eta must lie in (0, e^-1)");
        const PsiProfile prof = cutoff_psi(eta);
        const double h1sq =
            2.0 * M_PI * (prof.int_psi_sq_r + prof.int_grad_sq_r);
        const double gsq = 8.0 * M_PI * prof.int_psi_sq_grad_sq_r;
        PsiNormRow row;
        row.eta = eta;
        row.h1_norm = std::sqrt(h1sq);
        row.grad_sq_norm = std::sqrt(gsq);
        row.grad_sq_bound =
            std::sqrt(8.0 * M_PI * gamma3_upper(std::log(-std::log(eta))));
        rows.push_back(row);
    }
    return rows;
}

// ============================================================================
// Randomized ensembles
// ============================================================================

ScalarField ensemble_field(const Grid& g, unsigned long long seed, double base,
                           double amp, int max_mode) {
    if (max_mode < 1) throw DomainError("ensemble_field: max_mode must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    struct Mode {
        int k, m;
        double a;
    };
    std::vector<Mode> modes;
    double total = 0.0;
    for (int k = 0; k <= max_mode; ++k)
        for (int m = 0; m <= max_mode; ++m) {
            if (k == 0 && m == 0) continue;
            const double a = uni(rng);
            modes.push_back({k, m, a});
            total += std::abs(a);
        }
    const double scale = (total > 0.0) ? amp / total : 0.0;

    ScalarField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.xc(i) / g.lx, y = g.yc(j) / g.ly;
            double v = base;
            for (const Mode& md : modes)
                v += scale * md.a * std::cos(md.k * M_PI * x) *
                     std::cos(md.m * M_PI * y);
            f(i, j) = v;
        }
    return f;
}

std::vector<EnsembleCheckStats> run_inequality_ensembles(
    int trials, unsigned long long seed, int grid_n) {
    if (trials < 1) throw DomainError("run_inequality_ensembles: trials >= 1");
    const Grid g(grid_n, grid_n, 1.0, 1.0);

    // Trial constants pinned with headroom over the maxima these ensembles
    // produce; a violation therefore signals a genuine regression, not noise.
    const double tm_trial_C = 0.25;  // observed minimal C stays below 0.027
    const double ln_trial_C = 0.5;   // observed minimal C is 0 at these knobs
    const double cone = rectangle_cone_constant(g.lx, g.ly, 2.0);
    const double delta2 = 0.5 * (2.0 + std::sqrt(2.0));

    auto mix = [](unsigned long long s, unsigned long long t) {
        s ^= t + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
        return s;
    };

    EnsembleCheckStats tm{"trudinger_moser", 0, 0, 0.0, 0.0, 0.0};
    EnsembleCheckStats ln{"lnimpr", 0, 0, 0.0, 0.0, 0.0};
    EnsembleCheckStats in{"interpolation", 0, 0, 0.0, 0.0, 0.0};
    EnsembleCheckStats po{"poincare", 0, 0, 0.0, 0.0, 0.0};
    EnsembleCheckStats cr{"crucial", 0, 0, 0.0, 0.0, 0.0};

    auto track = [](EnsembleCheckStats& st, bool ok, double slack, double c) {
        if (st.trials == 0) {
            st.min_slack = st.max_slack = slack;
        } else {
            st.min_slack = std::min(st.min_slack, slack);
            st.max_slack = std::max(st.max_slack, slack);
        }
        st.trials += 1;
        if (!ok) st.violations += 1;
        st.max_minimal_C = std::max(st.max_minimal_C, c);
    };

    for (int t = 0; t < trials; ++t) {
        const unsigned long long st = mix(seed, 977ULL * (t + 1));
        {
            const ScalarField f = ensemble_field(g, mix(st, 1), 1.0, 0.8);
            const ScalarField gg = ensemble_field(g, mix(st, 2), 0.0, 1.0);
            const double a = 0.5 + 0.5 * double(t % 4);
            const TmReport r = check_trudinger_moser(f, gg, a, 2.0, tm_trial_C);
            track(tm, r.satisfied, r.rhs - r.lhs, r.minimal_C);
        }
        {
            const ScalarField f = ensemble_field(g, mix(st, 3), 1.0, 0.8);
            const LnimprReport r = check_lnimpr(f, 3.0, 2.0, 1.0, ln_trial_C);
            track(ln, r.satisfied, r.rhs - r.lhs, r.minimal_C);
        }
        {
            const ScalarField f = ensemble_field(g, mix(st, 4), 0.0, 1.0);
            const InterpolationReport r =
                check_interpolation(f, 0.5, 2.0, cone);
            track(in, r.pointwise_ok, r.margin, 0.0);
        }
        {
            const ScalarField f = ensemble_field(g, mix(st, 5), 0.0, 1.0);
            const PoincareReport r = check_poincare(f);
            track(po, r.satisfied, 1.0 - std::max(r.ratio1, r.ratio2), 0.0);
        }
        {
            const ScalarField f = ensemble_field(g, mix(st, 6), 1.0, 0.8);
            const CrucialReport r = check_crucial(f, 1.0, 2.0, delta2);
            track(cr, r.satisfied,
                  std::min(r.rhs1 - r.lhs1, r.rhs2 - r.lhs2), 0.0);
        }
    }

    // plateau-profile norm table: strict decay in eta plus the closed-form cap
    EnsembleCheckStats ps{"psi_eta", 1, 0, 0.0, 0.0, 0.0};
    {
        const std::vector<double> etas{1e-2, 1e-3, 1e-4};
        const auto rows = psi_eta_norm_table(etas);
        double worst = 1e300;
        for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
            worst = std::min(worst, rows[i].h1_norm - rows[i + 1].h1_norm);
            worst =
                std::min(worst, rows[i].grad_sq_norm - rows[i + 1].grad_sq_norm);
        }
        for (const auto& row : rows)
            worst = std::min(worst, row.grad_sq_bound - row.grad_sq_norm);
        ps.min_slack = ps.max_slack = worst;
        if (!(worst > 0.0)) ps.violations = 1;
    }

    return {tm, ln, in, po, cr, ps};
}

}  // namespace chemoflow
