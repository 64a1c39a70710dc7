#pragma once

#include <string>

#include "chemoflow/sim_config.hpp"

namespace chemoflow {

// ============================================================================
// On-disk run description: a small TOML-style format.
//
//   # comment
//   [grid]
//   nx = 64          # integers
//   lx = 1.0         # floats
//   [model]
//   fluid = true     # booleans
//   phi = "zero"     # strings (quotes optional for bare words)
//   [model.sensitivity]
//   variant = "isotropic"
//   [output]
//   snapshots = [0.5, 1.0]   # float arrays
//
// Recognized keys:
//   grid.nx  grid.ny  grid.lx  grid.ly
//   time.dt_max  time.t_end  time.cfl  time.max_steps  time.dt_min
//   model.fluid  model.gamma  model.s0  model.s1  model.phi  model.wgrad_betas
//   model.sensitivity.variant  model.sensitivity.angle
//   model.sensitivity.a  model.sensitivity.b  model.sensitivity.omega
//   ic.n0  ic.u0
//   solver.linear_tol
//   output.every  output.snapshots  output.snapshots_binary
// Unknown keys raise ConfigError (typos should not silently change runs).
// ============================================================================

// Parse config text into a SimConfig (defaults fill unset keys).  The result
// is NOT validated; call require_valid() before running.
SimConfig parse_config_text(const std::string& text);

// Read and parse a config file.
SimConfig load_config(const std::string& path);

// Set one dotted key from its textual value, e.g. ("model.s0", "0.75").
// Shared by the parser and the sweep axis machinery.
void apply_config_key(SimConfig& cfg, const std::string& key,
                      const std::string& value);

// Serialize back to config text (round-trips through parse_config_text).
std::string config_to_text(const SimConfig& cfg);

}  // namespace chemoflow
