#pragma once

#include <string>
#include <vector>

#include "chemoflow/grid.hpp"
#include "chemoflow/sensitivity.hpp"

namespace chemoflow {

// ============================================================================
// Full description of one simulation: grid, time stepping, model parameters,
// initial data and output plan.  Mirrors the config file layout; see
// config_file.hpp for the on-disk format.
// ============================================================================
struct SimConfig {
    // [grid]
    int nx = 64, ny = 64;
    double lx = 1.0, ly = 1.0;

    // [time]
    double dt_max = 1e-3;
    double t_end = 1.0;
    double cfl = 0.4;           // fraction of the admissible advective step
    long max_steps = 0;         // 0 = no step cap
    double dt_min = 1e-8;       // below this the run is declared stalled

    // [model]
    bool fluid = false;         // couple the incompressible flow
    double gamma = 1.0;         // sensitivity decay power
    double s0 = 0.5;            // sensitivity amplitude
    double s1 = 0.0;            // sensitivity shift
    std::string phi = "zero";   // potential descriptor (forcing is n grad(phi))

    // [model.sensitivity]
    std::string sensitivity_variant = "isotropic";
    double sensitivity_angle = 1.5707963267948966;  // rotational mix angle
    double nsd_a = 1.0, nsd_b = 1.0, nsd_omega = 0.0;

    // [ic]
    std::string n0 = "cosx:1.0,0.3";
    std::string u0 = "zero";

    // [solver]
    double linear_tol = 1e-10;

    // [output]
    double out_every = 0.01;               // diagnostics cadence (time units)
    std::vector<double> snapshot_times;    // snapshot schedule
    bool snapshots_binary = false;         // also write raw little-endian dumps
    std::vector<double> wgrad_betas{2.0};  // weighted-gradient beta columns

    // runtime (not config-file keys)
    unsigned long long seed = 0;

    Grid make_grid() const { return Grid(nx, ny, lx, ly); }
    SensitivitySpec make_sensitivity() const;
};

// Returns the list of violated constraints (empty = valid).
std::vector<std::string> validate(const SimConfig& cfg);

// Throwing wrapper around validate().
void require_valid(const SimConfig& cfg);

// ----------------------------------------------------------------------------
// Gravitational-type potential descriptors:
//   "zero"                   phi = 0
//   "linear:ax,ay"           phi = ax*x + ay*y
//   "cos:amp,kx,ky"          phi = amp*cos(pi kx x/Lx)*cos(pi ky y/Ly)
// ----------------------------------------------------------------------------
ScalarField sample_potential(const std::string& desc, const Grid& g);

}  // namespace chemoflow
