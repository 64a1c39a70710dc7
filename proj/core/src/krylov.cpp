#include "chemoflow/krylov.hpp"

#include <algorithm>
#include <cmath>

namespace chemoflow {

namespace {
double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}
double nrm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }
}  // namespace

KrylovResult bicgstab(const LinOp& apply, const LinOp& precond,
                      const std::vector<double>& b, std::vector<double>& x,
                      double tol, int max_iter) {
    const std::size_t n = b.size();
    KrylovResult res;

    std::vector<double> r(n), rhat(n), p(n, 0.0), v(n, 0.0);
    std::vector<double> phat(n), shat(n), s(n), t(n), ax(n);

    apply(x, ax);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ax[i];
    rhat = r;

    const double bnorm = nrm2(b);
    if (bnorm == 0.0) {  // b = 0 -> x = 0 is exact
        std::fill(x.begin(), x.end(), 0.0);
        res.converged = true;
        return res;
    }

    double rho = 1.0, alpha = 1.0, omega = 1.0;
    double rnorm = nrm2(r);
    res.residual_history.push_back(rnorm / bnorm);
    if (rnorm <= tol * bnorm) {
        res.converged = true;
        res.rel_residual = rnorm / bnorm;
        return res;
    }

    const double breakdown = 1e-300;
    for (int it = 1; it <= max_iter; ++it) {
        const double rho1 = dot(rhat, r);
        if (std::abs(rho1) < breakdown) break;
        if (it == 1) {
            p = r;
        } else {
            const double beta = (rho1 / rho) * (alpha / omega);
            for (std::size_t i = 0; i < n; ++i)
                p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        precond(p, phat);
        apply(phat, v);
        const double rhv = dot(rhat, v);
        if (std::abs(rhv) < breakdown) break;
        alpha = rho1 / rhv;
        for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        double snorm = nrm2(s);
        if (snorm <= tol * bnorm) {
            for (std::size_t i = 0; i < n; ++i) x[i] += alpha * phat[i];
            res.converged = true;
            res.iterations = it;
            res.rel_residual = snorm / bnorm;
            res.residual_history.push_back(res.rel_residual);
            return res;
        }
        precond(s, shat);
        apply(shat, t);
        const double tt = dot(t, t);
        if (tt < breakdown) break;
        omega = dot(t, s) / tt;
        for (std::size_t i = 0; i < n; ++i)
            x[i] += alpha * phat[i] + omega * shat[i];
        for (std::size_t i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
        rho = rho1;
        rnorm = nrm2(r);
        res.residual_history.push_back(rnorm / bnorm);
        res.iterations = it;
        if (rnorm <= tol * bnorm) {
            res.converged = true;
            res.rel_residual = rnorm / bnorm;
            return res;
        }
        if (std::abs(omega) < breakdown) break;
    }
    res.converged = false;
    res.rel_residual = res.residual_history.empty() ? 1.0 : res.residual_history.back();
    return res;
}

}  // namespace chemoflow
