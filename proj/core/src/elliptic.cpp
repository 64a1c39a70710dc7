#include "chemoflow/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "chemoflow/krylov.hpp"
#include "chemoflow/ops.hpp"

namespace chemoflow {

ScalarField apply_signal_operator(const ScalarField& c, const MacVelocity& u) {
    ScalarField lap = laplacian_neumann(c);
    ScalarField adv = upwind_flux_divergence(c, u);
    ScalarField out(c.grid);
    for (std::size_t k = 0; k < out.v.size(); ++k)
        out.v[k] = c.v[k] - lap.v[k] + adv.v[k];
    return out;
}

ScalarField solve_signal(const ScalarField& n, const MacVelocity& u,
                         const SpectralSolver& fft, double tol,
                         SignalSolveReport* report) {
    require_same_grid(n.grid, u.grid, "solve_signal");
    require_same_grid(n.grid, fft.grid(), "solve_signal");
    require_finite(n, "solve_signal");
    if (min_value(n) < 0.0)
        throw DomainError("solve_signal: negative density input");

    if (max_abs(u) == 0.0) {
        // pure Helmholtz problem: one exact transform solve
        ScalarField c = fft.helmholtz_cells(1.0, 1.0, n);
        if (report) {
            report->direct = true;
            report->iterations = 0;
            report->rel_residual = 0.0;
        }
        return c;
    }

    const Grid& g = n.grid;
    auto apply = [&g, &u](const std::vector<double>& x, std::vector<double>& out) {
        ScalarField cx(g);
        cx.v = x;
        out = apply_signal_operator(cx, u).v;
    };
    auto precond = [&g, &fft](const std::vector<double>& x, std::vector<double>& out) {
        ScalarField rx(g);
        rx.v = x;
        out = fft.helmholtz_cells(1.0, 1.0, rx).v;
    };

    std::vector<double> x = fft.helmholtz_cells(1.0, 1.0, n).v;  // warm start
    KrylovResult kr = bicgstab(apply, precond, n.v, x, tol, 300);
    if (!kr.converged)
        throw SolverStallError("solve_signal: BiCGStab stalled at relative residual " +
                                   std::to_string(kr.rel_residual),
                               kr.residual_history);
    if (report) {
        report->direct = false;
        report->iterations = kr.iterations;
        report->rel_residual = kr.rel_residual;
    }
    ScalarField c(g);
    c.v = std::move(x);
    return c;
}

double weighted_identity_residual(const ScalarField& c, const ScalarField& n,
                                  double sigma1, double r) {
    require_same_grid(c.grid, n.grid, "weighted_identity_residual");
    if (!(sigma1 > 0.0) || !(r > 0.0))
        throw DomainError("weighted_identity_residual: need sigma1 > 0, r > 0");
    const Grid& g = c.grid;
    const double vol = g.cell_area();
    const double ihx = 1.0 / g.hx();
    const double ihy = 1.0 / g.hy();

    // face-gradient term with face-averaged weight
    double t_grad = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            const double d = (c(i, j) - c(i - 1, j)) * ihx;
            const double cf = 0.5 * (c(i, j) + c(i - 1, j));
            t_grad += d * d / std::pow(sigma1 + cf, r + 1.0);
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double d = (c(i, j) - c(i, j - 1)) * ihy;
            const double cf = 0.5 * (c(i, j) + c(i, j - 1));
            t_grad += d * d / std::pow(sigma1 + cf, r + 1.0);
        }
    t_grad *= r * vol;

    double t_n = 0.0, t_c = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double wgt = std::pow(sigma1 + c(i, j), -r);
            t_n += n(i, j) * wgt;
            t_c += c(i, j) * wgt;
        }
    t_n *= vol;
    t_c *= vol;

    return std::abs(t_grad + t_n - t_c);
}

double cell_source_floor_ratio(const SpectralSolver& fft, int ci, int cj) {
    const Grid& g = fft.grid();
    if (ci < 0 || ci >= g.nx || cj < 0 || cj >= g.ny)
        throw DomainError("cell_source_floor_ratio: cell index out of range");
    ScalarField w(g);
    w(ci, cj) = 1.0 / g.cell_area();  // unit mass
    ScalarField z = fft.helmholtz_cells(1.0, 1.0, w);
    return min_value(z);
}

double estimate_C_Omega(const SpectralSolver& fft, int samples) {
    if (samples < 4)
        throw DomainError("estimate_C_Omega: need samples >= 4");
    const Grid& g = fft.grid();
    const int m = std::max(2, int(std::floor(std::sqrt(double(samples)))));

    std::set<std::pair<int, int>> cells;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            const int i = std::min(g.nx - 1, ((2 * a + 1) * g.nx) / (2 * m));
            const int j = std::min(g.ny - 1, ((2 * b + 1) * g.ny) / (2 * m));
            cells.insert({i, j});
        }
    // the floor is worst for sources tucked into corners; always include them
    cells.insert({0, 0});
    cells.insert({g.nx - 1, 0});
    cells.insert({0, g.ny - 1});
    cells.insert({g.nx - 1, g.ny - 1});

    double floor_ratio = std::numeric_limits<double>::infinity();
    for (const auto& [i, j] : cells)
        floor_ratio = std::min(floor_ratio, cell_source_floor_ratio(fft, i, j));
    return floor_ratio;
}

double estimate_C_Omega(const Grid& g, int samples) {
    SpectralSolver fft(g);
    return estimate_C_Omega(fft, samples);
}

}  // namespace chemoflow
