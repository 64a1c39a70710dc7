#include "chemoflow/transport.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chemoflow/ops.hpp"

namespace chemoflow {

FaceField drift_field(const ScalarField& n, const ScalarField& c,
                      const MacVelocity& u, const SensitivitySpec& spec) {
    require_same_grid(n.grid, c.grid, "drift_field");
    require_same_grid(n.grid, u.grid, "drift_field");
    const Grid& g = n.grid;
    const int nx = g.nx, ny = g.ny;
    const double ihx = 1.0 / g.hx();
    const double ihy = 1.0 / g.hy();

    FaceField w(g, 0.0);

    // reflected (Neumann) ghost access for the transverse gradient stencils
    auto cg = [&](int i, int j) {
        i = std::clamp(i, 0, nx - 1);
        j = std::clamp(j, 0, ny - 1);
        return c(i, j);
    };

    // x-faces (interior only; wall drift is zero by the no-flux condition)
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i) {
            const double dcdx = (c(i, j) - c(i - 1, j)) * ihx;
            const double dcdy = (cg(i - 1, j + 1) + cg(i, j + 1) -
                                 cg(i - 1, j - 1) - cg(i, j - 1)) *
                                (0.25 * ihy);
            const double nf = 0.5 * (n(i - 1, j) + n(i, j));
            const double cf = 0.5 * (c(i - 1, j) + c(i, j));
            const Mat2 S = sensitivity_eval(spec, g.xf(i), g.yc(j), nf, cf);
            double sx, sy;
            S.apply(dcdx, dcdy, sx, sy);
            w.u[w.uidx(i, j)] = u.u[u.uidx(i, j)] + sx;
        }

    // y-faces
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double dcdy = (c(i, j) - c(i, j - 1)) * ihy;
            const double dcdx = (cg(i + 1, j - 1) + cg(i + 1, j) -
                                 cg(i - 1, j - 1) - cg(i - 1, j)) *
                                (0.25 * ihx);
            const double nf = 0.5 * (n(i, j - 1) + n(i, j));
            const double cf = 0.5 * (c(i, j - 1) + c(i, j));
            const Mat2 S = sensitivity_eval(spec, g.xc(i), g.yf(j), nf, cf);
            double sx, sy;
            S.apply(dcdx, dcdy, sx, sy);
            w.v[w.vidx(i, j)] = u.v[u.vidx(i, j)] + sy;
        }

    return w;
}

ScalarField advance_cells(const ScalarField& n, const FaceField& w, double dt,
                          const SpectralSolver& fft) {
    require_same_grid(n.grid, w.grid, "advance_cells");
    require_same_grid(n.grid, fft.grid(), "advance_cells");
    require_finite(n, "advance_cells");
    require_finite(w, "advance_cells");
    if (!(dt > 0.0)) throw DomainError("advance_cells: dt must be > 0");
    if (min_value(n) < 0.0)
        throw DomainError("advance_cells: negative density input");

    // sharp donor-cell stability bound
    const double rate = max_outflow_rate(w);
    if (dt * rate > 1.0)
        throw CflError("advance_cells: drift CFL violated (dt*rate = " +
                           std::to_string(dt * rate) + ")",
                       dt, rate > 0.0 ? 1.0 / rate : dt);

    // explicit upwind drift
    ScalarField adv = upwind_flux_divergence(n, w);
    ScalarField star(n.grid);
    for (std::size_t k = 0; k < star.v.size(); ++k)
        star.v[k] = n.v[k] - dt * adv.v[k];

    // implicit diffusion; mean mode has eigenvalue 1, so mass passes through
    ScalarField out = fft.helmholtz_cells(1.0, dt, star);

    // The transform solve can leave O(1e-16 * max) negative dust where the
    // true solution underflows.  Clamp it and restore the exact cell sum; a
    // violation beyond round-off scale means the scheme itself broke, which
    // must surface.
    const double mn = min_value(out);
    if (mn < 0.0) {
        const double scale = std::max(1.0, max_abs(out));
        if (mn < -1e-10 * scale)
            throw DomainError("advance_cells: positivity violated beyond round-off (min = " +
                              std::to_string(mn) + ")");
        const double target = kahan_sum(out.v);
        for (double& x : out.v)
            if (x < 0.0) x = 0.0;
        const double clamped = kahan_sum(out.v);
        if (clamped > 0.0 && target > 0.0) {
            const double fac = target / clamped;
            for (double& x : out.v) x *= fac;
        }
    }
    return out;
}

}  // namespace chemoflow
