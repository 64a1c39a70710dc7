#pragma once

#include "chemoflow/grid.hpp"

namespace chemoflow {

// ============================================================================
// Cutoff families used by the localized estimates.
// ============================================================================

// Radial bump centered at q: 1 on the ball of radius delta/2, 0 outside the
// ball of radius delta, radially non-increasing, C^2 across both seams.  The
// profile rho(s) = (1 - t^3)^4, t = 2s-1 on s in [1/2,1], satisfies
// |rho'| <= 7.82 * sqrt(rho), so |grad phi| <= K sqrt(phi) with K*delta < 8.
// Throws CutoffResolutionError when delta <= 2*max(hx,hy).
ScalarField cutoff_phi(const Grid& g, double qx, double qy, double delta);

// Scalar profile value (continuum), exposed for tests.
double cutoff_phi_profile(double s);

// ----------------------------------------------------------------------------
// Logarithmic corner cutoff psi_eta(r) = ln(-ln r) - ln(-ln eta) on r < eta,
// extended by 0 outside.  Its radial integrals concentrate
// double-exponentially at r -> 0; the substitution r = exp(-e^tau) turns
// them into smooth exponentially-decaying integrands on a half line, where
// composite Simpson converges fast.  The relevant region reaches radii far
// below the smallest positive double (the closed forms pick up mass down to
// r ~ exp(-e^30)), so no pointwise r-space sampling can represent it: the
// profile therefore carries the integrals themselves, each evaluated in tau
// where every factor stays representable.
//
// Closed forms for cross-checks:
//   int_grad_sq_r        = 1/|ln eta|     (exact)
//   int_psi_sq_grad_sq_r = 2/|ln eta|     (exact)
// and for the plane, |grad(psi^2)| = 2 psi |psi'| gives
//   int_R2 |grad(psi^2)|^2 dx = 8 pi * int_psi_sq_grad_sq_r = 16 pi/|ln eta|.
// ----------------------------------------------------------------------------
struct PsiProfile {
    double eta = 0.0;
    double x0 = 0.0;                    // ln(-ln eta)
    double int_grad_sq_r = 0.0;         // int_0^eta psi'^2 r dr
    double int_psi_sq_grad_sq_r = 0.0;  // int_0^eta psi^2 psi'^2 r dr
    double int_psi_sq_r = 0.0;          // int_0^eta psi^2 r dr
};

// Requires 0 < eta < 1.  npoints must be odd (composite Simpson).
PsiProfile cutoff_psi(double eta, int npoints = 4001);

double psi_value(double eta, double r);  // continuum psi_eta(r), 0 for r>=eta

}  // namespace chemoflow
