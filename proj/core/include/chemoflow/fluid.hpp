#pragma once

#include "chemoflow/spectral.hpp"

namespace chemoflow {

// ============================================================================
// Incompressible flow step (no-slip box, unit viscosity):
//   u_t + (u.grad)u = Lap u - grad p + n grad phi,   div u = 0.
//
// Chorin splitting on the MAC grid:
//   1. conservative donor-cell advection (control-volume advecting speeds
//      interpolated so each momentum CV sees a divergence-free transport
//      field; with zero forcing the update is doubly stochastic, hence
//      kinetic-energy non-increasing),
//   2. buoyant forcing n grad(phi) with the *discrete* face gradient of the
//      sampled potential (so a spatially constant n forces a pure gradient,
//      which the projection removes exactly),
//   3. implicit Euler diffusion via the sine-transform solvers,
//   4. pressure projection (transform Poisson solve, mean-zero p).
// ============================================================================

struct FluidStepReport {
    double max_div_before = 0.0;  // before projection
    double max_div_after = 0.0;
};

// Advance u (and the pressure diagnosis p) by dt.  n and phi are cell fields;
// the forcing is n averaged to faces times the discrete gradient of phi.
// Throws CflError when dt exceeds the sharp momentum-advection bound.
void ns_step(MacVelocity& u, ScalarField& p, const ScalarField& n,
             const ScalarField& phi, double dt, const SpectralSolver& fft,
             FluidStepReport* report = nullptr);

// Leray projection of an arbitrary face field onto discretely divergence-free
// fields with zero wall-normal entries.  Optionally returns the potential.
MacVelocity project(const FaceField& w, const SpectralSolver& fft,
                    ScalarField* potential = nullptr);

// Sharp advective stability rate for the momentum CVs (analogue of
// max_outflow_rate on the staggered control volumes).
double momentum_outflow_rate(const MacVelocity& u);

// Discrete enstrophy integral |grad u|^2 + |grad v|^2 with no-slip ghosts.
double enstrophy(const MacVelocity& u);

}  // namespace chemoflow
