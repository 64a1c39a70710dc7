#include "chemoflow/cutoff.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace chemoflow {

double cutoff_phi_profile(double s) {
    if (s <= 0.5) return 1.0;
    if (s >= 1.0) return 0.0;
    const double t = 2.0 * s - 1.0;
    const double q = 1.0 - t * t * t;
    return q * q * q * q;
}

ScalarField cutoff_phi(const Grid& g, double qx, double qy, double delta) {
    const double hmax = std::max(g.hx(), g.hy());
    if (!(delta > 2.0 * hmax))
        throw CutoffResolutionError(
            "cutoff_phi: delta = " + std::to_string(delta) +
            " not resolved by mesh (need delta > 2*max(hx,hy) = " +
            std::to_string(2.0 * hmax) + ")");
    ScalarField phi(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double rr = std::hypot(g.xc(i) - qx, g.yc(j) - qy);
            phi(i, j) = cutoff_phi_profile(rr / delta);
        }
    return phi;
}

double psi_value(double eta, double r) {
    if (r >= eta) return 0.0;
    if (r <= 0.0) return std::numeric_limits<double>::infinity();
    return std::log(-std::log(r)) - std::log(-std::log(eta));
}

PsiProfile cutoff_psi(double eta, int npoints) {
    if (!(eta > 0.0 && eta < 1.0))
        throw DomainError("cutoff_psi: eta must lie in (0,1)");
    if (npoints < 3 || npoints % 2 == 0)
        throw DomainError("cutoff_psi: npoints must be odd and >= 3");

    PsiProfile p;
    p.eta = eta;
    p.x0 = std::log(-std::log(eta));

    // With tau = ln(-ln r):  psi = tau - x0,  r psi' = -e^{-tau},  and
    // int_0^eta G dr = int_{x0}^inf G(r(tau)) r e^tau dtau.  The three
    // integrands collapse to
    //   psi'^2 r dr        ->  e^{-tau}
    //   psi^2 psi'^2 r dr  ->  (tau-x0)^2 e^{-tau}
    //   psi^2 r dr         ->  (tau-x0)^2 exp(tau - 2 e^tau)
    // so nothing ever divides by r.  Truncating at x0 + 36 leaves a relative
    // tail of order e^{-36}.
    const double tau_len = 36.0;
    const int n = npoints;
    const double dtau = tau_len / (n - 1);

    const double scale = std::exp(-p.x0);  // e^{-x0} = 1/|ln eta|
    double s_grad = 0.0, s_pg = 0.0, s_psi = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = i * dtau;  // tau - x0
        const double tau = p.x0 + u;
        const double simpson =
            (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        const double w = simpson * (dtau / 3.0);
        const double decay = std::exp(-u) * scale;
        s_grad += w * decay;
        s_pg += w * u * u * decay;
        // exponent first: exp(tau - 2 e^tau) underflows to an honest zero
        s_psi += w * u * u * std::exp(tau - 2.0 * std::exp(tau));
    }
    p.int_grad_sq_r = s_grad;
    p.int_psi_sq_grad_sq_r = s_pg;
    p.int_psi_sq_r = s_psi;
    return p;
}

}  // namespace chemoflow
