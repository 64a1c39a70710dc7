#pragma once

#include <utility>
#include <vector>

#include "chemoflow/state.hpp"

namespace chemoflow {

// ============================================================================
// Scalar functionals tracked along a run.  All quadrature is the solver's
// own: cell sums times hx*hy, face-gradient energies, MAC face sums.
//
// nbar0 denotes the conserved mass mean (1/|Omega|) int n0; the transport
// step conserves the cell sum exactly, so it is recovered from the current
// state as mean(n).  Deviations (dev_*, lyapunov) are measured against it,
// not against the instantaneous mean of c.
// ============================================================================
struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;
    double l2_n = 0.0, l3_n = 0.0, linf_n = 0.0;
    double entropy = 0.0;          // int (n ln n + e^{-1})
    double n_log_n1 = 0.0;         // int n ln(n+1)
    double grad_log_n1_sq = 0.0;   // int |grad ln(n+1)|^2
    double kinetic = 0.0;          // int |u|^2
    double enstrophy = 0.0;        // int |grad u|^2
    double min_c = 0.0;
    double c_w1inf = 0.0;          // max(|c|_inf, |grad c|_inf)
    std::vector<double> weighted_grad;  // int |grad c|^2/(s1+c)^{beta+1}, per beta
    double lyapunov = 0.0;         // int (ctilde^2 + |grad ctilde|^2)
    double dev_n_l2 = 0.0;         // ||n - nbar0||_2
    double dev_n_linf = 0.0;       // ||n - nbar0||_inf
    double dev_c_w1inf = 0.0;      // ||ctilde||_W1inf
    double dev_c_h1 = 0.0;         // sqrt(lyapunov) = ||ctilde||_H1
};

DiagnosticsRecord record(const State& s, const SimConfig& cfg);

// Cell-based weighted gradient energy |grad c|^2/(s1+c)^{beta+1} summed over
// cells whose centers lie in the closed ball B_delta(q).  beta > 1.
double localized_weighted_gradient(const ScalarField& c, double qx, double qy,
                                   double delta, double beta, double s1);

// Same weight, cells with centers in the half-open box [x0,x1) x [y0,y1);
// half-open boxes tile the domain exactly (partition-consistency tests).
double weighted_gradient_box(const ScalarField& c, double x0, double x1,
                             double y0, double y1, double beta, double s1);

// Whole-domain version with the same cell-based quadrature.
double weighted_gradient_total(const ScalarField& c, double beta, double s1);

// ----------------------------------------------------------------------------
// Smallness modulus of the weighted gradient: for each radius delta, the sup
// over an lattice_n x lattice_n lattice of ball centers q of the localized
// weighted gradient.  Nested balls over the same fixed lattice make the map
// monotone nondecreasing in delta by construction.
// ----------------------------------------------------------------------------
struct ModulusPoint {
    double delta = 0.0;
    double value = 0.0;
};
std::vector<ModulusPoint> gradient_modulus(const ScalarField& c,
                                           const std::vector<double>& deltas,
                                           double beta, double s1,
                                           int lattice_n = 16);

// ----------------------------------------------------------------------------
// Exponential-rate fit: least squares on ln y over the trailing fraction of
// the series.  lambda = -slope; r_squared in [0,1] (1 for an exact fit or a
// constant series).
// ----------------------------------------------------------------------------
struct DecayFit {
    double lambda = 0.0;
    double r_squared = 1.0;
    int points = 0;
};
DecayFit decay_rate(const std::vector<std::pair<double, double>>& series,
                    double window = 0.5);

// First positive Neumann eigenvalue of -Lap on the rectangle.
double mu1_rectangle(double lx, double ly);

// Stabilization threshold for the isotropic sensitivity at decay power
// gamma >= 1:  (1 + 1/mu1) / ((1/gamma)(7+4 sqrt 2)/(9+4 sqrt 2) + 1/mu1)
//              * (mass / c_omega)^(gamma-1).
double s_star(double gamma, double mass, double mu1, double c_omega);

// ----------------------------------------------------------------------------
// Parabolic Hoelder seminorm over a short history of snapshots:
//   max |f(x,t) - f(y,s)| / (|x-y|^theta + |t-s|^(theta/2))
// Exhaustive over all pairs when affordable, otherwise a seeded subsample of
// max_pairs pairs.
// ----------------------------------------------------------------------------
double holder_seminorm(const std::vector<std::pair<double, ScalarField>>& history,
                       double theta, long max_pairs = 100000,
                       unsigned long long seed = 777);

// phi^4-weighted local entropy int (n ln n + e^{-1}) phi^4.
double localized_entropy(const ScalarField& n, const ScalarField& phi);

}  // namespace chemoflow
