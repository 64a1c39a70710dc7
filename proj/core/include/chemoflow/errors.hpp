#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace chemoflow {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad configuration file / inconsistent SimConfig.
struct ConfigError : Error {
    using Error::Error;
};

// Input field violates a precondition (negative density, NaN, grid mismatch...).
struct DomainError : Error {
    using Error::Error;
};

// An explicit sub-step would break its stability bound at the requested dt.
// Callers are expected to shrink dt and retry.
struct CflError : Error {
    double dt;
    double max_admissible_dt;
    CflError(const std::string& what, double dt_, double max_dt)
        : Error(what), dt(dt_), max_admissible_dt(max_dt) {}
};

// Iterative linear solve failed to reach the requested tolerance.
struct SolverStallError : Error {
    std::vector<double> residual_history;
    SolverStallError(const std::string& what, std::vector<double> hist)
        : Error(what), residual_history(std::move(hist)) {}
};

// Cutoff radius not resolved by the mesh.
struct CutoffResolutionError : Error {
    using Error::Error;
};

// Time stepper could not make progress (dt driven below its floor).
struct TimeStepError : Error {
    using Error::Error;
};

}  // namespace chemoflow
