#pragma once
// ============================================================================
//  inequality_lab — numeric verification of the functional inequalities that
//  back the solver's a-priori estimates, on synthetic and simulated fields.
//
//  Every check is deterministic, side-effect free, and reports measured
//  left/right hand sides so slack can be audited rather than trusted.
// ============================================================================

#include <string>
#include <vector>

#include "chemoflow/grid.hpp"

namespace chemoflow {

// --------------------------------------------------------------------------
// Entropy-vs-gradient bound (Trudinger-Moser flavored):
//   int f|g| <= (1/a) int f ln(f/fbar) + (1+lambda)a/(8 pi) int f int |grad g|^2
//              + C a int f (int |g|)^2 + (C/a) int f
// The right side is affine in C, so the minimal admissible C is closed-form.
// --------------------------------------------------------------------------
struct TmReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double minimal_C = 0.0;  // smallest C >= 0 making lhs <= rhs
    bool satisfied = false;
};
TmReport check_trudinger_moser(const ScalarField& f, const ScalarField& g,
                               double a, double lambda, double C);

// --------------------------------------------------------------------------
// Power-norm bound with logarithmic improvement:
//   int f^{p+1} <= C (p+1)^2 / ln s * int(f ln f + e^-1) * int f^{p-2}|grad f|^2
//               + (4C)^{1+eps/2} (int f^{(eps/2)(p+1)/(1+eps)})^{2(1+eps)/eps}
//               + 6 s^{p+1} |Omega|
// The right side is increasing in C; the minimal C is found by bisection.
// --------------------------------------------------------------------------
struct LnimprReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double minimal_C = 0.0;
    bool satisfied = false;
};
LnimprReport check_lnimpr(const ScalarField& f, double p, double s, double eps,
                          double C);

// --------------------------------------------------------------------------
// Sup-norm interpolation between a Holder seminorm and an Lp norm.
// The constructive pointwise chain is
//   |f(x)| <= [f]_theta r^theta + C13 r^{-d/p} ||f||_p   for r in (0, R0],
// with R0 = diam(domain) and C13 the cone constant of the domain
// (|B_r(x) ^ Omega| >= r^d / C13^p for every x and r <= R0).  The check
// evaluates the chain at the optimizing radius clipped to R0; a vanishing
// seminorm falls back to the exact constant-field identity
// ||f||_inf = |Omega|^{-1/p} ||f||_p.
// --------------------------------------------------------------------------
struct InterpolationReport {
    double seminorm = 0.0;     // discrete Holder seminorm (pair enumeration)
    double lp = 0.0;           // discrete Lp norm
    double linf = 0.0;         // max |f| over grid points
    double r_star = 0.0;       // optimizing radius after clipping to diam
    double bound_value = 0.0;  // the verified sup-norm bound
    double margin = 0.0;       // bound_value - linf
    bool pointwise_ok = false;
};
InterpolationReport check_interpolation(const ScalarField& f, double theta,
                                        double p, double cone_constant,
                                        long max_pairs = 200000,
                                        unsigned long long seed = 1234);

// Exact area of B_r(corner) ^ [0,lx]x[0,ly]  (valid for 0 < r <= diagonal).
double rectangle_corner_area(double lx, double ly, double r);

// Valid cone constant for the rectangle: sup over r in (0, diam] of
// (r^2 / corner_area(r))^{1/p}.   The small-r limit is the quarter-disc
// value (4/pi)^{1/p}; the supremum sits at r = diam where the corner ball
// covers the whole box, so the constant stays valid up to the clip radius.
double rectangle_cone_constant(double lx, double ly, double p);

// --------------------------------------------------------------------------
// Spectral-gap (Poincare) ratios for mean-zero Neumann-compatible fields:
//   ratio1 = mu1 * int f^2   / int |grad f|^2
//   ratio2 = mu1 * int |grad f|^2 / int |lap f|^2
// measured against the *discrete* first eigenvalue, so both ratios are <= 1
// up to rounding for every mean-zero grid function.
// --------------------------------------------------------------------------
struct PoincareReport {
    double ratio1 = 0.0;
    double ratio2 = 0.0;
    double mu1_discrete = 0.0;
    bool satisfied = false;  // both ratios <= 1 + 1e-8
};
PoincareReport check_poincare(const ScalarField& f);

// Discrete first nonzero eigenvalue of the cell-centered Neumann Laplacian
// on the grid: min over directions of (2/h^2)(1 - cos(pi/n)).
double mu1_discrete(const Grid& g);

// --------------------------------------------------------------------------
// Fourth-power gradient vs. weighted-Hessian inequalities for positive f with
// zero wall-normal derivative, H(f) = f^gamma, Theta(f) = int_1^f dtau/H(tau):
//  (1)  int H'/H^k |grad f|^4  <=  ((2+sqrt(d))/(4-k))^2 int H^{4-k}/H' |D2 Theta|^2
//       (k = 4 uses (2+sqrt(d))^2 and weight |log H|^2 / H')
//  (2)  int H^{2-k}/H' |D2 f|^2 <= (delta+1)/delta * lhs1
//                                 + (1+delta) int H^{4-k}/H' |D2 Theta|^2
// evaluated with d = 2 via discrete Hessians (reflected ghosts at walls).
// --------------------------------------------------------------------------
struct CrucialReport {
    double lhs1 = 0.0, rhs1 = 0.0;
    double lhs2 = 0.0, rhs2 = 0.0;
    double constant1 = 0.0;  // the squared constant used in (1)
    bool satisfied = false;
};
CrucialReport check_crucial(const ScalarField& f, double gamma, double k,
                            double delta);

// --------------------------------------------------------------------------
// Norm table of the logarithmic plateau profile psi_eta (see cutoff.hpp):
//   h1_norm       = || psi ||_{H1(R^2)}          (radial quadrature)
//   grad_sq_norm  = || grad(psi^2) ||_{L2(R^2)}  (exact value 4 sqrt(pi/|ln eta|))
//   grad_sq_bound = sqrt(8 pi Gamma(3, ln(-ln eta)))  upper bound for the same
// Requires every eta in (0, e^-1); both norm columns decrease as eta does.
// --------------------------------------------------------------------------
struct PsiNormRow {
    double eta = 0.0;
    double h1_norm = 0.0;
    double grad_sq_norm = 0.0;
    double grad_sq_bound = 0.0;
};
std::vector<PsiNormRow> psi_eta_norm_table(const std::vector<double>& etas);

// Upper incomplete gamma at integer parameter 3: (x^2 + 2x + 2) e^{-x}.
double gamma3_upper(double x);

// --------------------------------------------------------------------------
// Seeded smooth-field generator for randomized ensembles: a cosine mixture
//   base + sum_{(k,m) != (0,0), k,m <= max_mode} a_km cos(k pi x/lx) cos(m pi y/ly)
// with sum |a_km| = amp, so min f >= base - amp by construction.  With
// base = 0 the discrete mean is exactly zero.  Wall-normal derivatives of
// every mode vanish, so the samples are Neumann-compatible.
// --------------------------------------------------------------------------
ScalarField ensemble_field(const Grid& g, unsigned long long seed, double base,
                           double amp, int max_mode = 3);

// --------------------------------------------------------------------------
// Fixed ensemble sweep over every check, used by the CLI and the verifier.
// One row per check: trials, violation count, slack extrema, and the largest
// minimal constant observed (where the check has one).
// --------------------------------------------------------------------------
struct EnsembleCheckStats {
    std::string name;
    int trials = 0;
    int violations = 0;
    double min_slack = 0.0;
    double max_slack = 0.0;
    double max_minimal_C = 0.0;
};
std::vector<EnsembleCheckStats> run_inequality_ensembles(
    int trials, unsigned long long seed, int grid_n = 32);

}  // namespace chemoflow
