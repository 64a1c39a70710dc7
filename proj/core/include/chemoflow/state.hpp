#pragma once

#include "chemoflow/sim_config.hpp"
#include "chemoflow/spectral.hpp"

namespace chemoflow {

// ============================================================================
// Complete simulation state at one instant.  Invariants after initialize()
// and after every accepted step:
//   n >= 0 with positive mass;  min c > 0;  u discretely divergence-free
//   with zero wall-normal entries;  p mean-zero.
// ============================================================================
struct State {
    double t = 0.0;
    ScalarField n;   // cell density
    ScalarField c;   // signal concentration
    ScalarField p;   // pressure (mean-zero)
    MacVelocity u;   // fluid velocity
};

// Initial-data samplers (descriptor grammar below); used by initialize().
//
//   ic.n0:  "uniform:v"
//           "cosx:base,amp"      base + amp cos(pi x/Lx)
//           "cosy:base,amp"
//           "gaussian:base,peak,sigma[,cx,cy]"
//           "random:base,amp[,modes]"   seeded smooth cosine mixture
//   ic.u0:  "zero"
//           "vortex:amp[,kx,ky]"        discrete curl of a sine stream function
//           "random:amp[,modes]"        seeded random stream function
//           "grad:amp"                  pure gradient field (projection test)
ScalarField sample_density(const std::string& desc, const Grid& g,
                           unsigned long long seed);
MacVelocity sample_velocity(const std::string& desc, const Grid& g,
                            unsigned long long seed);

// Build the full initial state: sample n0 (clipped at 0), sample and project
// u0 when the fluid is enabled, then solve the signal equation for c.
State initialize(const SimConfig& cfg);
State initialize(const SimConfig& cfg, const SpectralSolver& fft);

}  // namespace chemoflow
