#pragma once

#include <functional>
#include <string>

#include "chemoflow/grid.hpp"

namespace chemoflow {

// Small dense 2x2 helper for the sensitivity tensor.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 rotation90() { return {0.0, 1.0, -1.0, 0.0}; }  // J: J*grad is grad rotated

    Mat2 scaled(double s) const { return {s * a11, s * a12, s * a21, s * a22}; }
    Mat2 sym() const {  // (S + S^T)/2
        const double off = 0.5 * (a12 + a21);
        return {a11, off, off, a22};
    }
    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
    // exact spectral norm (largest singular value) of a 2x2 matrix
    double spectral_norm() const;
    void apply(double gx, double gy, double& outx, double& outy) const {
        outx = a11 * gx + a12 * gy;
        outy = a21 * gx + a22 * gy;
    }
};

// ============================================================================
// Tensor-valued chemotactic sensitivity S(x, n, c) with signal-power decay:
// every built-in variant satisfies  |S|_2 <= s0 / (s1 + c)^gamma  exactly
// (the direction factor is normalized to unit spectral norm at construction).
//
//  isotropic               S = dec(c) I
//  rotational              S = dec(c) (cos(angle) I + sin(angle) J)
//  negative_semidefinite   S = dec(c) M,  M = [[-a, omega], [-omega, -b]] / |M|
//  custom                  arbitrary callback, classified by sampling
// ============================================================================
enum class SensitivityVariant { isotropic, rotational, negative_semidefinite, custom };

struct SensitivitySpec {
    SensitivityVariant variant = SensitivityVariant::isotropic;
    double s0 = 1.0;     // envelope amplitude, >= 0
    double s1 = 0.0;     // envelope shift, >= 0
    double gamma = 1.0;  // envelope decay power, > 0
    double angle = 0.0;  // rotational: mix angle (pi/2 = pure rotation)
    double nsd_a = 1.0;  // negative_semidefinite: diagonal decay rates
    double nsd_b = 1.0;
    double nsd_omega = 0.0;  // negative_semidefinite: antisymmetric part
    std::function<Mat2(double x, double y, double n, double c)> custom;
};

SensitivityVariant sensitivity_variant_from_string(const std::string& s);
std::string to_string(SensitivityVariant v);

// Envelope s0/(s1+c)^gamma; c > -s1 required by the caller.
double sensitivity_envelope(const SensitivitySpec& spec, double c);

// Evaluate the tensor at a point.
Mat2 sensitivity_eval(const SensitivitySpec& spec, double x, double y,
                      double n, double c);

// Structural classification: exact for the closed-form variants, Monte Carlo
// sampling over (x, y, n, c) for custom callbacks.
struct SensitivityClass {
    bool decay_ok = false;       // |S|_2 <= envelope (+1e-12) everywhere sampled
    bool neg_semidef = false;    // sym part has trace <= 0 and det >= 0
    bool isotropic_form = false; // S = s0 c^-gamma I (i.e. isotropic with s1 = 0)
};

SensitivityClass sensitivity_classify(const SensitivitySpec& spec,
                                      const Grid& g, int samples = 10000,
                                      unsigned long long seed = 12345);

}  // namespace chemoflow
