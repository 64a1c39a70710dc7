#pragma once

#include "chemoflow/sensitivity.hpp"
#include "chemoflow/spectral.hpp"

namespace chemoflow {

// ============================================================================
// Cell-density step for  n_t = Lap n - div(n (u + S grad c)).
//
// Splitting: explicit donor-cell upwind for the combined drift
// w = u + S grad c, then implicit Euler diffusion via the fast transform.
// Wall fluxes vanish identically (impermeable walls + Neumann signal), so the
// cell sum is conserved exactly; the implicit diffusion preserves the mean
// mode bit-exactly.  Positivity holds under the sharp donor-cell condition,
// which advance_cells checks and enforces by throwing CflError.
// ============================================================================

// Combined drift velocity at faces: w = u + S(x, n, c) grad c with the tensor
// evaluated at face midpoints (adjacent-cell averages of n and c, transverse
// gradient averaged from the four neighboring faces).  Wall entries are 0.
FaceField drift_field(const ScalarField& n, const ScalarField& c,
                      const MacVelocity& u, const SensitivitySpec& spec);

// One transport step.  Throws DomainError for negative/non-finite input and
// CflError when dt exceeds the sharp donor-cell bound.
ScalarField advance_cells(const ScalarField& n, const FaceField& w, double dt,
                          const SpectralSolver& fft);

}  // namespace chemoflow
