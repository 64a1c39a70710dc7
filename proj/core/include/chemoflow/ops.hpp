#pragma once

#include "chemoflow/grid.hpp"

namespace chemoflow {

// ============================================================================
// Discrete operators on the MAC grid.
//
// gradient / divergence are adjoint (up to the cell volume factor) under the
// convention that gradients of Neumann scalars vanish on wall faces and
// fluxes through walls are zero.  laplacian_neumann is implemented with the
// exact same floating-point operations as divergence(gradient(f)), so the
// composition identity holds bitwise, giving zero row sums (constants are in
// the kernel) and exact compatibility for the projection.
// ============================================================================

// Face gradient of a cell scalar; wall faces get 0 (homogeneous Neumann).
FaceField gradient(const ScalarField& f);

// Cell divergence of a face field.
ScalarField divergence(const FaceField& w);

// 5-point Laplacian with reflected (Neumann) ghosts; bitwise equal to
// divergence(gradient(f)).
ScalarField laplacian_neumann(const ScalarField& f);

// ---------------------------------------------------------------------------
// Quadrature and norms (midpoint rule; compensated summation).
// ---------------------------------------------------------------------------
double kahan_sum(const std::vector<double>& v);
double integrate(const ScalarField& f);              // sum f * hx*hy
double mean(const ScalarField& f);
double min_value(const ScalarField& f);
double max_value(const ScalarField& f);
double max_abs(const ScalarField& f);
double max_abs(const FaceField& w);
double l2_norm(const ScalarField& f);                // (integral f^2)^(1/2)
double lp_norm(const ScalarField& f, double p);
double linf_norm(const ScalarField& f);

// Face-quadrature integral of |w|^2 (each face weighted by a full cell area;
// wall-normal entries are zero for velocities so the overweight is harmless).
double integral_abs2(const FaceField& w);

// Dirichlet energy sum_faces |grad f|^2 hx hy; equals -<laplacian f, f> by
// summation by parts (used by the Poincare checks).
double dirichlet_energy(const ScalarField& f);

// max face-gradient magnitude, max(|df/dx|, |df/dy|) over interior faces.
double max_grad(const ScalarField& f);

// ---------------------------------------------------------------------------
// Donor-cell upwind transport pieces (shared by the signal and cell solvers).
// ---------------------------------------------------------------------------

// Divergence of the upwind flux w*f: face flux takes the upstream cell value,
// wall fluxes are zero.  Telescopes exactly, so sum(out) = 0.
ScalarField upwind_flux_divergence(const ScalarField& f, const FaceField& w);

// Sharp donor-cell stability rate: max over cells of the total outflow speed
// sum_faces max(+-w,0)/h.  An explicit update n - dt*div(upwind flux) keeps
// positivity iff dt * rate <= 1.
double max_outflow_rate(const FaceField& w);

}  // namespace chemoflow
