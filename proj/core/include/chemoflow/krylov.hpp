#pragma once

#include <functional>
#include <vector>

namespace chemoflow {

// Matrix-free, right-preconditioned BiCGStab.  apply(x, out) computes A x;
// precond(r, out) applies an approximate inverse (identity is fine).
// Convergence is measured on the true residual, ||r|| <= tol * ||b||.
struct KrylovResult {
    bool converged = false;
    int iterations = 0;
    double rel_residual = 0.0;
    std::vector<double> residual_history;  // relative residuals per iteration
};

using LinOp = std::function<void(const std::vector<double>&, std::vector<double>&)>;

KrylovResult bicgstab(const LinOp& apply, const LinOp& precond,
                      const std::vector<double>& b, std::vector<double>& x,
                      double tol, int max_iter);

}  // namespace chemoflow
