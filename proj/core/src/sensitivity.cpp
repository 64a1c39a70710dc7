#include "chemoflow/sensitivity.hpp"

#include <cmath>
#include <random>

namespace chemoflow {

double Mat2::spectral_norm() const {
    // singular values of a 2x2 from the closed form:
    // sigma_max^2 = (T + sqrt(T^2 - 4 D^2)) / 2 with T = sum of squares,
    // D = det.  Stable version via hypot combinations.
    const double t1 = std::hypot(a11 + a22, a12 - a21);
    const double t2 = std::hypot(a11 - a22, a12 + a21);
    return 0.5 * (t1 + t2);
}

SensitivityVariant sensitivity_variant_from_string(const std::string& s) {
    if (s == "isotropic") return SensitivityVariant::isotropic;
    if (s == "rotational") return SensitivityVariant::rotational;
    if (s == "negative_semidefinite") return SensitivityVariant::negative_semidefinite;
    if (s == "custom") return SensitivityVariant::custom;
    throw ConfigError("unknown sensitivity variant '" + s + "'");
}

std::string to_string(SensitivityVariant v) {
    switch (v) {
        case SensitivityVariant::isotropic: return "isotropic";
        case SensitivityVariant::rotational: return "rotational";
        case SensitivityVariant::negative_semidefinite: return "negative_semidefinite";
        case SensitivityVariant::custom: return "custom";
    }
    return "?";
}

double sensitivity_envelope(const SensitivitySpec& spec, double c) {
    return spec.s0 / std::pow(spec.s1 + c, spec.gamma);
}

namespace {
// Unit-spectral-norm direction factor for the negative_semidefinite variant.
Mat2 nsd_direction(const SensitivitySpec& spec) {
    Mat2 m{-spec.nsd_a, spec.nsd_omega, -spec.nsd_omega, -spec.nsd_b};
    const double nrm = m.spectral_norm();
    if (nrm > 0.0) m = m.scaled(1.0 / nrm);
    return m;
}
}  // namespace

Mat2 sensitivity_eval(const SensitivitySpec& spec, double x, double y,
                      double n, double c) {
    switch (spec.variant) {
        case SensitivityVariant::isotropic:
            return Mat2::identity().scaled(sensitivity_envelope(spec, c));
        case SensitivityVariant::rotational: {
            const double dec = sensitivity_envelope(spec, c);
            const Mat2 J = Mat2::rotation90();
            const double ca = std::cos(spec.angle), sa = std::sin(spec.angle);
            Mat2 m{ca, sa * J.a12, sa * J.a21, ca};
            return m.scaled(dec);
        }
        case SensitivityVariant::negative_semidefinite:
            return nsd_direction(spec).scaled(sensitivity_envelope(spec, c));
        case SensitivityVariant::custom:
            if (!spec.custom)
                throw DomainError("sensitivity_eval: custom variant without callback");
            return spec.custom(x, y, n, c);
    }
    throw DomainError("sensitivity_eval: bad variant");
}

SensitivityClass sensitivity_classify(const SensitivitySpec& spec,
                                      const Grid& g, int samples,
                                      unsigned long long seed) {
    SensitivityClass cls;
    const double tol = 1e-12;

    if (spec.variant != SensitivityVariant::custom) {
        // Closed forms: the direction factor has unit spectral norm by
        // construction, so the envelope bound holds exactly.
        cls.decay_ok = true;
        switch (spec.variant) {
            case SensitivityVariant::isotropic:
                // sym part = dec * I: trace 2*dec > 0 whenever s0 > 0
                cls.neg_semidef = (spec.s0 == 0.0);
                cls.isotropic_form = (spec.s1 == 0.0);
                break;
            case SensitivityVariant::rotational: {
                // sym part = dec cos(angle) I
                const double ca = std::cos(spec.angle);
                cls.neg_semidef = (spec.s0 == 0.0) || (ca <= tol);
                cls.isotropic_form = false;
                break;
            }
            case SensitivityVariant::negative_semidefinite:
                cls.neg_semidef = true;  // sym part = -dec diag(a,b)/|M|
                cls.isotropic_form = false;
                break;
            default: break;
        }
        return cls;
    }

    // Custom callback: sample (x, y, n, c) over the box and a representative
    // range of states.  Deterministic given the seed.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(0.0, g.lx), uy(0.0, g.ly);
    std::uniform_real_distribution<double> un(0.0, 10.0);
    // keep c away from 0 when s1 = 0 (envelope blows up, comparison still valid)
    std::uniform_real_distribution<double> uc(1e-3, 10.0);

    bool decay_ok = true, nsd = true, iso = (spec.s1 == 0.0);
    for (int k = 0; k < samples; ++k) {
        const double x = ux(rng), y = uy(rng), n = un(rng), c = uc(rng);
        const Mat2 S = sensitivity_eval(spec, x, y, n, c);
        const double env = sensitivity_envelope(spec, c);
        if (S.spectral_norm() > env + 1e-12 * (1.0 + env)) decay_ok = false;
        const Mat2 sym = S.sym();
        if (sym.trace() > tol || sym.det() < -tol) nsd = false;
        const double dec = spec.s0 / std::pow(c, spec.gamma);
        if (std::abs(S.a11 - dec) > 1e-10 * (1.0 + dec) ||
            std::abs(S.a22 - dec) > 1e-10 * (1.0 + dec) ||
            std::abs(S.a12) > 1e-10 || std::abs(S.a21) > 1e-10)
            iso = false;
        if (!decay_ok && !nsd && !iso) break;
    }
    cls.decay_ok = decay_ok;
    cls.neg_semidef = nsd;
    cls.isotropic_form = iso;
    return cls;
}

}  // namespace chemoflow
