#include "chemoflow/ops.hpp"

#include <algorithm>
#include <cmath>

namespace chemoflow {

FaceField gradient(const ScalarField& f) {
    const Grid& g = f.grid;
    FaceField w(g, 0.0);
    const double ihx = 1.0 / g.hx();
    const double ihy = 1.0 / g.hy();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            w.u[w.uidx(i, j)] = (f(i, j) - f(i - 1, j)) * ihx;
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            w.v[w.vidx(i, j)] = (f(i, j) - f(i, j - 1)) * ihy;
    return w;
}

ScalarField divergence(const FaceField& w) {
    const Grid& g = w.grid;
    ScalarField d(g);
    const double ihx = 1.0 / g.hx();
    const double ihy = 1.0 / g.hy();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            d(i, j) = (w.u[w.uidx(i + 1, j)] - w.u[w.uidx(i, j)]) * ihx +
                      (w.v[w.vidx(i, j + 1)] - w.v[w.vidx(i, j)]) * ihy;
    return d;
}

ScalarField laplacian_neumann(const ScalarField& f) {
    // Same floating-point operations as divergence(gradient(f)): face
    // gradients first (0 on walls), then the face difference.  Keeping the
    // op order identical makes the compatibility identity exact.
    const Grid& g = f.grid;
    ScalarField out(g);
    const double ihx = 1.0 / g.hx();
    const double ihy = 1.0 / g.hy();
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double ge = (i + 1 < g.nx) ? (f(i + 1, j) - f(i, j)) * ihx : 0.0;
            const double gw = (i > 0) ? (f(i, j) - f(i - 1, j)) * ihx : 0.0;
            const double gn = (j + 1 < g.ny) ? (f(i, j + 1) - f(i, j)) * ihy : 0.0;
            const double gs = (j > 0) ? (f(i, j) - f(i, j - 1)) * ihy : 0.0;
            out(i, j) = (ge - gw) * ihx + (gn - gs) * ihy;
        }
    }
    return out;
}

double kahan_sum(const std::vector<double>& v) {
    // Neumaier's variant: unlike the classic update it keeps the correction
    // when a summand exceeds the running total, so e.g. {1e16, 1, -1e16}
    // comes out exactly 1.
    double s = 0.0, comp = 0.0;
    for (double x : v) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            comp += (s - t) + x;
        else
            comp += (x - t) + s;
        s = t;
    }
    return s + comp;
}

double integrate(const ScalarField& f) { return kahan_sum(f.v) * f.grid.cell_area(); }

double mean(const ScalarField& f) { return integrate(f) / f.grid.area(); }

double min_value(const ScalarField& f) {
    return *std::min_element(f.v.begin(), f.v.end());
}

double max_value(const ScalarField& f) {
    return *std::max_element(f.v.begin(), f.v.end());
}

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

double max_abs(const FaceField& w) {
    double m = 0.0;
    for (double x : w.u) m = std::max(m, std::abs(x));
    for (double x : w.v) m = std::max(m, std::abs(x));
    return m;
}

double l2_norm(const ScalarField& f) {
    double s = 0.0, comp = 0.0;
    for (double x : f.v) {
        const double y = x * x - comp;
        const double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return std::sqrt(s * f.grid.cell_area());
}

double lp_norm(const ScalarField& f, double p) {
    double s = 0.0, comp = 0.0;
    for (double x : f.v) {
        const double y = std::pow(std::abs(x), p) - comp;
        const double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return std::pow(s * f.grid.cell_area(), 1.0 / p);
}

double linf_norm(const ScalarField& f) { return max_abs(f); }

double integral_abs2(const FaceField& w) {
    double s = 0.0;
    for (double x : w.u) s += x * x;
    for (double x : w.v) s += x * x;
    return s * w.grid.cell_area();
}

double dirichlet_energy(const ScalarField& f) {
    return integral_abs2(gradient(f));
}

double max_grad(const ScalarField& f) {
    return max_abs(gradient(f));
}

ScalarField upwind_flux_divergence(const ScalarField& f, const FaceField& w) {
    require_same_grid(f.grid, w.grid, "upwind_flux_divergence");
    const Grid& g = f.grid;
    const int nx = g.nx, ny = g.ny;
    // face fluxes, wall entries stay 0
    std::vector<double> fx(std::size_t(nx + 1) * ny, 0.0);
    std::vector<double> fy(std::size_t(nx) * (ny + 1), 0.0);
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i) {
            const double s = w.u[w.uidx(i, j)];
            fx[w.uidx(i, j)] = s * (s >= 0.0 ? f(i - 1, j) : f(i, j));
        }
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double s = w.v[w.vidx(i, j)];
            fy[w.vidx(i, j)] = s * (s >= 0.0 ? f(i, j - 1) : f(i, j));
        }
    ScalarField out(g);
    const double ihx = 1.0 / g.hx();
    const double ihy = 1.0 / g.hy();
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            out(i, j) = (fx[w.uidx(i + 1, j)] - fx[w.uidx(i, j)]) * ihx +
                        (fy[w.vidx(i, j + 1)] - fy[w.vidx(i, j)]) * ihy;
    return out;
}

double max_outflow_rate(const FaceField& w) {
    const Grid& g = w.grid;
    const int nx = g.nx, ny = g.ny;
    const double ihx = 1.0 / g.hx();
    const double ihy = 1.0 / g.hy();
    double rate = 0.0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double we = w.u[w.uidx(i + 1, j)];
            const double ww = w.u[w.uidx(i, j)];
            const double wn = w.v[w.vidx(i, j + 1)];
            const double ws = w.v[w.vidx(i, j)];
            const double out = std::max(we, 0.0) * ihx + std::max(-ww, 0.0) * ihx +
                               std::max(wn, 0.0) * ihy + std::max(-ws, 0.0) * ihy;
            rate = std::max(rate, out);
        }
    return rate;
}

}  // namespace chemoflow
