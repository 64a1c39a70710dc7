#pragma once

#include "chemoflow/grid.hpp"
#include "chemoflow/spectral.hpp"

namespace chemoflow {

// ============================================================================
// Signal equation:  -Lap c + u . grad c + c = n  with Neumann walls.
//
// Discretization: 5-point Laplacian, conservative upwind advection with the
// divergence-free face velocity u (wall fluxes vanish).  The resulting matrix
// is an M-matrix, so c > 0 whenever n >= 0 has positive mass, and the
// conservative form makes sum(c) = sum(n) up to the solver residual.
//
// With u = 0 the solve is a single fast transform; otherwise BiCGStab
// preconditioned by the transform-based (I - Lap)^{-1}.
// ============================================================================
struct SignalSolveReport {
    bool direct = false;       // transform fast path (u = 0)
    int iterations = 0;
    double rel_residual = 0.0;
};

ScalarField solve_signal(const ScalarField& n, const MacVelocity& u,
                         const SpectralSolver& fft, double tol,
                         SignalSolveReport* report = nullptr);

// Matrix-free application of the signal operator c -> c - Lap c + div(u c);
// exposed for residual checks and tests.
ScalarField apply_signal_operator(const ScalarField& c, const MacVelocity& u);

// ----------------------------------------------------------------------------
// Residual of the discrete weighted identity for the signal equation
// (r > 0, sigma1 > 0):
//   r * int |grad c|^2/(sigma1+c)^{r+1} + int n/(sigma1+c)^r
//     = int c/(sigma1+c)^r
// Face-quadrature gradients with face-averaged weights.  O(h^2) on smooth
// analytic cases.
// ----------------------------------------------------------------------------
double weighted_identity_residual(const ScalarField& c, const ScalarField& n,
                                  double sigma1, double r);

// ----------------------------------------------------------------------------
// Certified-from-above estimate of the uniform floor constant:
// the minimum over sampled unit-mass single-cell sources w of
// min_x z_w(x), where -Lap z + z = w.  By linearity every nonnegative n
// obeys  min c >= (floor over all cells) * int n;  sampling a sublattice
// (plus the four corner cells) gives an upper estimate of that floor.
// samples ~ m^2 lattice sites; samples >= 4.
// ----------------------------------------------------------------------------
double estimate_C_Omega(const Grid& g, int samples);
double estimate_C_Omega(const SpectralSolver& fft, int samples);

// Floor ratio min(z)/int(w) for a unit point source in cell (ci, cj).
double cell_source_floor_ratio(const SpectralSolver& fft, int ci, int cj);

}  // namespace chemoflow
