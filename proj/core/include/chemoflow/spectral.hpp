#pragma once

#include "chemoflow/grid.hpp"

namespace chemoflow {

// ============================================================================
// Direct solvers for constant-coefficient Helmholtz/Poisson problems on the
// MAC grid, by fast trigonometric diagonalization (FFTW r2r transforms).
//
//  * cell-centered scalars with Neumann walls      -> DCT-II in x and y
//  * u-face values (Dirichlet in x, no-slip walls
//    reflected at half-cells in y)                 -> DST-I (x) x DST-II (y)
//  * v-face values                                 -> DST-II (x) x DST-I (y)
//
// The sampled trigonometric modes are *exact* eigenvectors of the 5-point
// stencils with those ghost conventions, so the solves are direct: one
// forward transform, a diagonal scale, one inverse transform.  Plans are
// created with FFTW_ESTIMATE (deterministic algorithm choice) under a global
// mutex; execution is single-threaded per solver instance.
//
// A solver instance owns its buffers: share one per thread, never across.
// ============================================================================
class SpectralSolver {
public:
    explicit SpectralSolver(const Grid& g);
    ~SpectralSolver();
    SpectralSolver(const SpectralSolver&) = delete;
    SpectralSolver& operator=(const SpectralSolver&) = delete;

    const Grid& grid() const { return g_; }

    // Solve (a I - b Lap) f = rhs on cell centers, a > 0, b >= 0.
    ScalarField helmholtz_cells(double a, double b, const ScalarField& rhs) const;

    // Solve Lap f = rhs with the incompatible mean removed; f has zero mean.
    ScalarField poisson_cells_meanzero(const ScalarField& rhs) const;

    // Solve (a I - b Lap) on the wall-tangent interior of w.u / w.v in place.
    // Wall-normal entries (x-boundary for u, y-boundary for v) are left as-is
    // and treated as homogeneous Dirichlet data by the stencil.
    void helmholtz_ufaces(double a, double b, FaceField& w) const;
    void helmholtz_vfaces(double a, double b, FaceField& w) const;

    // Smallest nonzero eigenvalue of -Lap on mean-zero Neumann scalars
    // (the discrete Poincare constant): min((2/hx^2)(1-cos(pi/nx)), y-analog).
    double mu1_cells() const;

private:
    struct Impl;
    Grid g_;
    Impl* impl_;
};

}  // namespace chemoflow
