#include "chemoflow/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <vector>

namespace chemoflow {

namespace {
// FFTW planning (and wisdom updates) are not thread-safe; execution is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

std::vector<double> cell_eigs(int n, double h) {
    std::vector<double> lam(n);
    for (int k = 0; k < n; ++k)
        lam[k] = (2.0 / (h * h)) * (1.0 - std::cos(M_PI * k / n));
    return lam;
}

// DST-I of size n-1: modes sin(pi (k+1) i / n), i = 1..n-1
std::vector<double> dst1_eigs(int n, double h) {
    std::vector<double> lam(n - 1);
    for (int k = 0; k < n - 1; ++k)
        lam[k] = (2.0 / (h * h)) * (1.0 - std::cos(M_PI * (k + 1) / n));
    return lam;
}

// DST-II of size n: modes sin(pi (k+1)(j+1/2) / n), odd across both walls
std::vector<double> dst2_eigs(int n, double h) {
    std::vector<double> lam(n);
    for (int k = 0; k < n; ++k)
        lam[k] = (2.0 / (h * h)) * (1.0 - std::cos(M_PI * (k + 1) / n));
    return lam;
}
}  // namespace

struct SpectralSolver::Impl {
    // cell-centered (ny x nx)
    double* cbuf = nullptr;
    fftw_plan cell_fwd = nullptr;
    fftw_plan cell_inv = nullptr;
    std::vector<double> lamx_c, lamy_c;
    double cell_scale = 1.0;

    // u interior (ny x (nx-1))
    double* ubuf = nullptr;
    fftw_plan u_fwd = nullptr;
    fftw_plan u_inv = nullptr;
    std::vector<double> lamx_u, lamy_u;
    double u_scale = 1.0;

    // v interior ((ny-1) x nx)
    double* vbuf = nullptr;
    fftw_plan v_fwd = nullptr;
    fftw_plan v_inv = nullptr;
    std::vector<double> lamx_v, lamy_v;
    double v_scale = 1.0;
};

SpectralSolver::SpectralSolver(const Grid& g) : g_(g), impl_(new Impl) {
    const int nx = g.nx, ny = g.ny;
    if (nx < 8 || ny < 8)
        throw ConfigError("spectral solver: grid must be at least 8x8, got " +
                          std::to_string(nx) + "x" + std::to_string(ny));
    impl_->lamx_c = cell_eigs(nx, g.hx());
    impl_->lamy_c = cell_eigs(ny, g.hy());
    impl_->lamx_u = dst1_eigs(nx, g.hx());
    impl_->lamy_u = dst2_eigs(ny, g.hy());
    impl_->lamx_v = dst2_eigs(nx, g.hx());
    impl_->lamy_v = dst1_eigs(ny, g.hy());
    impl_->cell_scale = 1.0 / (4.0 * double(nx) * double(ny));
    impl_->u_scale = 1.0 / (2.0 * double(nx) * 2.0 * double(ny));
    impl_->v_scale = 1.0 / (2.0 * double(nx) * 2.0 * double(ny));

    std::lock_guard<std::mutex> lock(plan_mutex());
    impl_->cbuf = fftw_alloc_real(std::size_t(nx) * ny);
    impl_->ubuf = fftw_alloc_real(std::size_t(nx - 1) * ny);
    impl_->vbuf = fftw_alloc_real(std::size_t(nx) * (ny - 1));

    impl_->cell_fwd = fftw_plan_r2r_2d(ny, nx, impl_->cbuf, impl_->cbuf,
                                       FFTW_REDFT10, FFTW_REDFT10, FFTW_ESTIMATE);
    impl_->cell_inv = fftw_plan_r2r_2d(ny, nx, impl_->cbuf, impl_->cbuf,
                                       FFTW_REDFT01, FFTW_REDFT01, FFTW_ESTIMATE);
    impl_->u_fwd = fftw_plan_r2r_2d(ny, nx - 1, impl_->ubuf, impl_->ubuf,
                                    FFTW_RODFT10, FFTW_RODFT00, FFTW_ESTIMATE);
    impl_->u_inv = fftw_plan_r2r_2d(ny, nx - 1, impl_->ubuf, impl_->ubuf,
                                    FFTW_RODFT01, FFTW_RODFT00, FFTW_ESTIMATE);
    impl_->v_fwd = fftw_plan_r2r_2d(ny - 1, nx, impl_->vbuf, impl_->vbuf,
                                    FFTW_RODFT00, FFTW_RODFT10, FFTW_ESTIMATE);
    impl_->v_inv = fftw_plan_r2r_2d(ny - 1, nx, impl_->vbuf, impl_->vbuf,
                                    FFTW_RODFT00, FFTW_RODFT01, FFTW_ESTIMATE);
}

SpectralSolver::~SpectralSolver() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(impl_->cell_fwd);
    fftw_destroy_plan(impl_->cell_inv);
    fftw_destroy_plan(impl_->u_fwd);
    fftw_destroy_plan(impl_->u_inv);
    fftw_destroy_plan(impl_->v_fwd);
    fftw_destroy_plan(impl_->v_inv);
    fftw_free(impl_->cbuf);
    fftw_free(impl_->ubuf);
    fftw_free(impl_->vbuf);
    delete impl_;
}

double SpectralSolver::mu1_cells() const {
    return std::min(impl_->lamx_c[1], impl_->lamy_c[1]);
}

ScalarField SpectralSolver::helmholtz_cells(double a, double b,
                                            const ScalarField& rhs) const {
    require_same_grid(g_, rhs.grid, "helmholtz_cells");
    if (!(a > 0.0) || b < 0.0)
        throw DomainError("helmholtz_cells: need a > 0, b >= 0");
    const int nx = g_.nx, ny = g_.ny;
    double* buf = impl_->cbuf;
    std::copy(rhs.v.begin(), rhs.v.end(), buf);
    fftw_execute(impl_->cell_fwd);
    for (int j = 0; j < ny; ++j) {
        const double ly = impl_->lamy_c[j];
        for (int i = 0; i < nx; ++i)
            buf[std::size_t(j) * nx + i] /= (a + b * (impl_->lamx_c[i] + ly));
    }
    fftw_execute(impl_->cell_inv);
    ScalarField out(g_);
    const double s = impl_->cell_scale;
    for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] = buf[k] * s;
    return out;
}

ScalarField SpectralSolver::poisson_cells_meanzero(const ScalarField& rhs) const {
    require_same_grid(g_, rhs.grid, "poisson_cells_meanzero");
    const int nx = g_.nx, ny = g_.ny;
    double* buf = impl_->cbuf;
    std::copy(rhs.v.begin(), rhs.v.end(), buf);
    fftw_execute(impl_->cell_fwd);
    buf[0] = 0.0;  // drop the incompatible mean; pins the solution mean to 0
    for (int j = 0; j < ny; ++j) {
        const double ly = impl_->lamy_c[j];
        for (int i = 0; i < nx; ++i) {
            if (i == 0 && j == 0) continue;
            buf[std::size_t(j) * nx + i] /= -(impl_->lamx_c[i] + ly);
        }
    }
    fftw_execute(impl_->cell_inv);
    ScalarField out(g_);
    const double s = impl_->cell_scale;
    for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] = buf[k] * s;
    return out;
}

void SpectralSolver::helmholtz_ufaces(double a, double b, FaceField& w) const {
    require_same_grid(g_, w.grid, "helmholtz_ufaces");
    const int nx = g_.nx, ny = g_.ny;
    double* buf = impl_->ubuf;
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i)
            buf[std::size_t(j) * (nx - 1) + (i - 1)] = w.u[w.uidx(i, j)];
    fftw_execute(impl_->u_fwd);
    for (int j = 0; j < ny; ++j) {
        const double ly = impl_->lamy_u[j];
        for (int i = 0; i < nx - 1; ++i)
            buf[std::size_t(j) * (nx - 1) + i] /= (a + b * (impl_->lamx_u[i] + ly));
    }
    fftw_execute(impl_->u_inv);
    const double s = impl_->u_scale;
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i)
            w.u[w.uidx(i, j)] = buf[std::size_t(j) * (nx - 1) + (i - 1)] * s;
}

void SpectralSolver::helmholtz_vfaces(double a, double b, FaceField& w) const {
    require_same_grid(g_, w.grid, "helmholtz_vfaces");
    const int nx = g_.nx, ny = g_.ny;
    double* buf = impl_->vbuf;
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            buf[std::size_t(j - 1) * nx + i] = w.v[w.vidx(i, j)];
    fftw_execute(impl_->v_fwd);
    for (int j = 0; j < ny - 1; ++j) {
        const double ly = impl_->lamy_v[j];
        for (int i = 0; i < nx; ++i)
            buf[std::size_t(j) * nx + i] /= (a + b * (impl_->lamx_v[i] + ly));
    }
    fftw_execute(impl_->v_inv);
    const double s = impl_->v_scale;
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            w.v[w.vidx(i, j)] = buf[std::size_t(j - 1) * nx + i] * s;
}

}  // namespace chemoflow
