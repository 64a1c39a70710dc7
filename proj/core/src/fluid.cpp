#include "chemoflow/fluid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chemoflow/ops.hpp"

namespace chemoflow {

namespace {

// Control-volume advecting speeds for the u momentum CV at face (i,j).
// Interpolated so the CV divergence equals the mean of the two adjacent cell
// divergences (hence zero for a projected field).
struct UCvSpeeds {
    double ue, uw, vn, vs;
};
inline UCvSpeeds u_cv_speeds(const MacVelocity& u, int i, int j) {
    UCvSpeeds s;
    s.ue = 0.5 * (u.u[u.uidx(i, j)] + u.u[u.uidx(i + 1, j)]);
    s.uw = 0.5 * (u.u[u.uidx(i - 1, j)] + u.u[u.uidx(i, j)]);
    s.vn = 0.5 * (u.v[u.vidx(i - 1, j + 1)] + u.v[u.vidx(i, j + 1)]);
    s.vs = 0.5 * (u.v[u.vidx(i - 1, j)] + u.v[u.vidx(i, j)]);
    return s;
}

struct VCvSpeeds {
    double ue, uw, vn, vs;
};
inline VCvSpeeds v_cv_speeds(const MacVelocity& u, int i, int j) {
    VCvSpeeds s;
    s.ue = 0.5 * (u.u[u.uidx(i + 1, j - 1)] + u.u[u.uidx(i + 1, j)]);
    s.uw = 0.5 * (u.u[u.uidx(i, j - 1)] + u.u[u.uidx(i, j)]);
    s.vn = 0.5 * (u.v[u.vidx(i, j)] + u.v[u.vidx(i, j + 1)]);
    s.vs = 0.5 * (u.v[u.vidx(i, j - 1)] + u.v[u.vidx(i, j)]);
    return s;
}

}  // namespace

double momentum_outflow_rate(const MacVelocity& u) {
    const Grid& g = u.grid;
    const double ihx = 1.0 / g.hx();
    const double ihy = 1.0 / g.hy();
    double rate = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            const auto s = u_cv_speeds(u, i, j);
            const double out = std::max(s.ue, 0.0) * ihx + std::max(-s.uw, 0.0) * ihx +
                               std::max(s.vn, 0.0) * ihy + std::max(-s.vs, 0.0) * ihy;
            rate = std::max(rate, out);
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const auto s = v_cv_speeds(u, i, j);
            const double out = std::max(s.ue, 0.0) * ihx + std::max(-s.uw, 0.0) * ihx +
                               std::max(s.vn, 0.0) * ihy + std::max(-s.vs, 0.0) * ihy;
            rate = std::max(rate, out);
        }
    return rate;
}

MacVelocity project(const FaceField& w, const SpectralSolver& fft,
                    ScalarField* potential) {
    require_same_grid(w.grid, fft.grid(), "project");
    ScalarField d = divergence(w);
    ScalarField psi = fft.poisson_cells_meanzero(d);
    FaceField gpsi = gradient(psi);
    MacVelocity out = w;
    for (std::size_t k = 0; k < out.u.size(); ++k) out.u[k] -= gpsi.u[k];
    for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] -= gpsi.v[k];
    out.zero_wall_normal();
    if (potential) *potential = std::move(psi);
    return out;
}

void ns_step(MacVelocity& u, ScalarField& p, const ScalarField& n,
             const ScalarField& phi, double dt, const SpectralSolver& fft,
             FluidStepReport* report) {
    const Grid& g = u.grid;
    require_same_grid(g, n.grid, "ns_step");
    require_same_grid(g, phi.grid, "ns_step");
    require_same_grid(g, fft.grid(), "ns_step");
    require_finite(u, "ns_step");
    if (!(dt > 0.0)) throw DomainError("ns_step: dt must be > 0");

    const double rate = momentum_outflow_rate(u);
    if (dt * rate > 1.0)
        throw CflError("ns_step: advective CFL violated (dt*rate = " +
                           std::to_string(dt * rate) + ")",
                       dt, rate > 0.0 ? 1.0 / rate : dt);

    const int nx = g.nx, ny = g.ny;
    const double ihx = 1.0 / g.hx();
    const double ihy = 1.0 / g.hy();

    // --- explicit conservative advection --------------------------------
    MacVelocity star = u;
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i) {
            const auto s = u_cv_speeds(u, i, j);
            const double uc = u.u[u.uidx(i, j)];
            const double fe = s.ue * (s.ue >= 0.0 ? uc : u.u[u.uidx(i + 1, j)]);
            const double fw = s.uw * (s.uw >= 0.0 ? u.u[u.uidx(i - 1, j)] : uc);
            const double fn =
                s.vn * (s.vn >= 0.0 ? uc
                                    : (j + 1 < ny ? u.u[u.uidx(i, j + 1)] : 0.0));
            const double fs =
                s.vs * (s.vs >= 0.0 ? (j > 0 ? u.u[u.uidx(i, j - 1)] : 0.0) : uc);
            star.u[star.uidx(i, j)] =
                uc - dt * ((fe - fw) * ihx + (fn - fs) * ihy);
        }
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const auto s = v_cv_speeds(u, i, j);
            const double vc = u.v[u.vidx(i, j)];
            const double fn = s.vn * (s.vn >= 0.0 ? vc : u.v[u.vidx(i, j + 1)]);
            const double fs = s.vs * (s.vs >= 0.0 ? u.v[u.vidx(i, j - 1)] : vc);
            const double fe =
                s.ue * (s.ue >= 0.0 ? vc
                                    : (i + 1 < nx ? u.v[u.vidx(i + 1, j)] : 0.0));
            const double fw =
                s.uw * (s.uw >= 0.0 ? (i > 0 ? u.v[u.vidx(i - 1, j)] : 0.0) : vc);
            star.v[star.vidx(i, j)] =
                vc - dt * ((fe - fw) * ihx + (fn - fs) * ihy);
        }

    // --- implicit diffusion ----------------------------------------------
    fft.helmholtz_ufaces(1.0, dt, star);
    fft.helmholtz_vfaces(1.0, dt, star);

    // --- buoyant forcing n grad(phi) at faces ----------------------------
    // Added after the viscous solve so that for spatially constant n the
    // increment is exactly a discrete gradient and the projection removes it
    // completely: a uniform suspension under any potential stays at rest
    // (discrete hydrostatic balance).  Diffusing the force within its own
    // step would only contribute at O(dt^2) anyway.
    FaceField gphi = gradient(phi);
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i) {
            const double nf = 0.5 * (n(i - 1, j) + n(i, j));
            star.u[star.uidx(i, j)] += dt * nf * gphi.u[gphi.uidx(i, j)];
        }
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double nf = 0.5 * (n(i, j - 1) + n(i, j));
            star.v[star.vidx(i, j)] += dt * nf * gphi.v[gphi.vidx(i, j)];
        }

    // --- projection --------------------------------------------------------
    if (report) report->max_div_before = max_abs(divergence(star));
    ScalarField psi;
    u = project(star, fft, &psi);
    if (report) report->max_div_after = max_abs(divergence(u));

    p = ScalarField(g);
    const double idt = 1.0 / dt;
    for (std::size_t k = 0; k < p.v.size(); ++k) p.v[k] = psi.v[k] * idt;
}

double enstrophy(const MacVelocity& u) {
    const Grid& g = u.grid;
    const int nx = g.nx, ny = g.ny;
    const double ihx = 1.0 / g.hx();
    const double ihy = 1.0 / g.hy();
    const double vol = g.cell_area();
    double s = 0.0;

    // du/dx at cell centers
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double d = (u.u[u.uidx(i + 1, j)] - u.u[u.uidx(i, j)]) * ihx;
            s += d * d * vol;
        }
    // dv/dy at cell centers
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double d = (u.v[u.vidx(i, j + 1)] - u.v[u.vidx(i, j)]) * ihy;
            s += d * d * vol;
        }
    // du/dy at corner rows with no-slip odd ghosts; wall rows half weight
    for (int j = 0; j <= ny; ++j) {
        const double wj = (j == 0 || j == ny) ? 0.5 * vol : vol;
        for (int i = 0; i <= nx; ++i) {
            const double above = (j < ny) ? u.u[u.uidx(i, j)] : -u.u[u.uidx(i, ny - 1)];
            const double below = (j > 0) ? u.u[u.uidx(i, j - 1)] : -u.u[u.uidx(i, 0)];
            const double d = (above - below) * ihy;
            const double wi = (i == 0 || i == nx) ? 0.5 : 1.0;
            s += d * d * wj * wi;
        }
    }
    // dv/dx at corner columns
    for (int j = 0; j <= ny; ++j) {
        const double wj = (j == 0 || j == ny) ? 0.5 : 1.0;
        for (int i = 0; i <= nx; ++i) {
            const double right = (i < nx) ? u.v[u.vidx(i, j)] : -u.v[u.vidx(nx - 1, j)];
            const double left = (i > 0) ? u.v[u.vidx(i - 1, j)] : -u.v[u.vidx(0, j)];
            const double d = (right - left) * ihx;
            const double wi = (i == 0 || i == nx) ? 0.5 * vol : vol;
            s += d * d * wj * wi;
        }
    }
    return s;
}

}  // namespace chemoflow
