#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <random>

#include "chemoflow/cutoff.hpp"
#include "chemoflow/errors.hpp"
#include "chemoflow/krylov.hpp"
#include "chemoflow/ops.hpp"
#include "chemoflow/sensitivity.hpp"
#include "chemoflow/spectral.hpp"

using namespace chemoflow;

namespace {
constexpr double kPi = 3.14159265358979323846;

ScalarField random_field(const Grid& g, unsigned seed, double lo = -1.0,
                         double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    ScalarField f(g);
    for (auto& x : f.v) x = dist(rng);
    return f;
}
}  // namespace

// ============================================================================
// grid geometry
// ============================================================================

TEST_CASE("grid spacing, areas and center/face coordinates") {
    Grid g{8, 4, 2.0, 1.0};
    CHECK(g.hx() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.hy() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.cell_area() == doctest::Approx(0.0625).epsilon(1e-15));
    CHECK(g.area() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(g.diameter() == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
    CHECK(g.ncells() == 32);
    CHECK(g.xc(0) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(g.xf(0) == 0.0);
    CHECK(g.xf(8) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(g.yc(3) == doctest::Approx(0.875).epsilon(1e-15));
}

TEST_CASE("compensated summation survives catastrophic cancellation") {
    std::vector<double> v{1e16, 1.0, -1e16};
    CHECK(kahan_sum(v) == 1.0);
    // alternating large/small terms
    std::vector<double> w;
    for (int i = 0; i < 1000; ++i) {
        w.push_back(1e12);
        w.push_back(0.1);
        w.push_back(-1e12);
    }
    CHECK(kahan_sum(w) == doctest::Approx(100.0).epsilon(1e-12));
}

// ============================================================================
// discrete operators
// ============================================================================

TEST_CASE("divergence of gradient reproduces the Laplacian bitwise") {
    Grid g{33, 17, 1.3, 0.7};
    const ScalarField f = random_field(g, 42);
    const ScalarField lap = laplacian_neumann(f);
    const ScalarField dg = divergence(gradient(f));
    REQUIRE(lap.v.size() == dg.v.size());
    CHECK(std::memcmp(lap.v.data(), dg.v.data(),
                      lap.v.size() * sizeof(double)) == 0);
}

TEST_CASE("constants lie in the kernel of the Laplacian exactly") {
    Grid g{16, 16, 1.0, 1.0};
    ScalarField f(g);
    for (auto& x : f.v) x = 3.7;
    const ScalarField lap = laplacian_neumann(f);
    for (double x : lap.v) CHECK(x == 0.0);
}

TEST_CASE("Laplacian column sums vanish (discrete divergence theorem)") {
    Grid g{24, 10, 1.0, 2.0};
    const ScalarField f = random_field(g, 7);
    CHECK(std::abs(integrate(laplacian_neumann(f))) <= 1e-12);
}

TEST_CASE("Dirichlet energy equals the quadratic form of the Laplacian") {
    Grid g{20, 28, 1.1, 0.9};
    const ScalarField f = random_field(g, 9);
    const ScalarField lap = laplacian_neumann(f);
    double quad = 0.0;
    for (std::size_t k = 0; k < f.v.size(); ++k) quad -= lap.v[k] * f.v[k];
    quad *= g.cell_area();
    CHECK(dirichlet_energy(f) == doctest::Approx(quad).epsilon(1e-11));
}

TEST_CASE("quadrature and norms agree with closed forms") {
    Grid g{32, 8, 2.0, 0.5};
    ScalarField f(g);
    for (auto& x : f.v) x = -1.5;
    CHECK(integrate(f) == doctest::Approx(-1.5 * g.area()).epsilon(1e-15));
    CHECK(mean(f) == doctest::Approx(-1.5).epsilon(1e-15));
    CHECK(min_value(f) == -1.5);
    CHECK(max_value(f) == -1.5);
    CHECK(max_abs(f) == 1.5);
    CHECK(linf_norm(f) == 1.5);
    CHECK(l2_norm(f) == doctest::Approx(1.5 * std::sqrt(g.area())).epsilon(1e-14));
    CHECK(lp_norm(f, 3.0) ==
          doctest::Approx(1.5 * std::pow(g.area(), 1.0 / 3.0)).epsilon(1e-14));

    const ScalarField r = random_field(g, 68);
    CHECK(lp_norm(r, 2.0) == doctest::Approx(l2_norm(r)).epsilon(1e-13));
}

TEST_CASE("max face gradient of a linear ramp is its slope") {
    Grid g{16, 16, 1.0, 1.0};
    ScalarField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) f(i, j) = 2.0 * g.xc(i);
    CHECK(max_grad(f) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("upwind flux divergence takes the upstream value and telescopes") {
    Grid g{4, 1, 4.0, 1.0};  // hx = 1
    ScalarField f(g);
    f(0, 0) = 1.0;
    f(1, 0) = 2.0;
    f(2, 0) = 3.0;
    f(3, 0) = 4.0;
    FaceField w(g);
    w.ux(2, 0) = 1.0;  // single open interior face, flow to the right
    const ScalarField d = upwind_flux_divergence(f, w);
    CHECK(d(0, 0) == 0.0);
    CHECK(d(1, 0) == 2.0);   // loses f=2 through its east face
    CHECK(d(2, 0) == -2.0);  // receives it
    CHECK(d(3, 0) == 0.0);
    CHECK(max_outflow_rate(w) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(integrate(d)) <= 1e-15);
}

TEST_CASE("upwind flux divergence of a negative-velocity face") {
    Grid g{3, 1, 3.0, 1.0};
    ScalarField f(g);
    f(0, 0) = 5.0;
    f(1, 0) = 7.0;
    f(2, 0) = 1.0;
    FaceField w(g);
    w.ux(1, 0) = -2.0;  // flow to the left between cells 0 and 1
    const ScalarField d = upwind_flux_divergence(f, w);
    CHECK(d(0, 0) == doctest::Approx(-14.0).epsilon(1e-15));
    CHECK(d(1, 0) == doctest::Approx(14.0).epsilon(1e-15));
    CHECK(max_outflow_rate(w) == doctest::Approx(2.0).epsilon(1e-15));
}

// ============================================================================
// spectral solvers
// ============================================================================

TEST_CASE("cell Helmholtz solve inverts the operator on eigenvectors") {
    Grid g{24, 16, 1.5, 1.0};
    SpectralSolver fft(g);
    const int k = 3, m = 2;
    const double lamx =
        2.0 / (g.hx() * g.hx()) * (1.0 - std::cos(kPi * k / g.nx));
    const double lamy =
        2.0 / (g.hy() * g.hy()) * (1.0 - std::cos(kPi * m / g.ny));
    const double a = 1.3, b = 0.7;
    ScalarField mode(g), rhs(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double v = std::cos(kPi * k * (i + 0.5) / g.nx) *
                             std::cos(kPi * m * (j + 0.5) / g.ny);
            mode(i, j) = v;
            rhs(i, j) = (a + b * (lamx + lamy)) * v;
        }
    const ScalarField sol = fft.helmholtz_cells(a, b, rhs);
    for (std::size_t q = 0; q < sol.v.size(); ++q)
        CHECK(sol.v[q] == doctest::Approx(mode.v[q]).epsilon(1e-10));
}

TEST_CASE("mean-zero Poisson solve matches the eigen decomposition") {
    Grid g{32, 32, 1.0, 1.0};
    SpectralSolver fft(g);
    const int k = 1;
    const double lam = 2.0 / (g.hx() * g.hx()) * (1.0 - std::cos(kPi * k / g.nx));
    ScalarField rhs(g), mode(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double v = std::cos(kPi * k * (i + 0.5) / g.nx);
            mode(i, j) = v;
            // the cell Laplacian of this mode is -lam * mode
            rhs(i, j) = -lam * v;
        }
    const ScalarField sol = fft.poisson_cells_meanzero(rhs);
    CHECK(std::abs(mean(sol)) <= 1e-13);
    for (std::size_t q = 0; q < sol.v.size(); ++q)
        CHECK(sol.v[q] == doctest::Approx(mode.v[q]).epsilon(1e-10));
}

TEST_CASE("smallest positive cell eigenvalue matches the closed form") {
    Grid g{40, 24, 2.0, 1.0};
    SpectralSolver fft(g);
    const double mx = 2.0 / (g.hx() * g.hx()) * (1.0 - std::cos(kPi / g.nx));
    const double my = 2.0 / (g.hy() * g.hy()) * (1.0 - std::cos(kPi / g.ny));
    CHECK(fft.mu1_cells() == doctest::Approx(std::min(mx, my)).epsilon(1e-13));
}

TEST_CASE("face Helmholtz solves invert the no-slip operator on eigenvectors") {
    Grid g{16, 12, 1.0, 0.75};
    SpectralSolver fft(g);
    const double a = 1.0, b = 0.05;
    const int k = 2, m = 3;
    const double lamx =
        2.0 / (g.hx() * g.hx()) * (1.0 - std::cos(kPi * k / g.nx));
    const double lamy =
        2.0 / (g.hy() * g.hy()) * (1.0 - std::cos(kPi * m / g.ny));

    SUBCASE("x faces") {
        FaceField w(g), exact(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 1; i < g.nx; ++i) {
                const double v = std::sin(kPi * k * i / double(g.nx)) *
                                 std::sin(kPi * m * (j + 0.5) / g.ny);
                exact.ux(i, j) = v;
                w.ux(i, j) = (a + b * (lamx + lamy)) * v;
            }
        fft.helmholtz_ufaces(a, b, w);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 1; i < g.nx; ++i)
                CHECK(w.ux(i, j) ==
                      doctest::Approx(exact.ux(i, j)).epsilon(1e-10));
    }
    SUBCASE("y faces") {
        FaceField w(g), exact(g);
        for (int j = 1; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double v = std::sin(kPi * k * (i + 0.5) / g.nx) *
                                 std::sin(kPi * m * j / double(g.ny));
                exact.vy(i, j) = v;
                w.vy(i, j) = (a + b * (lamx + lamy)) * v;
            }
        fft.helmholtz_vfaces(a, b, w);
        for (int j = 1; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                CHECK(w.vy(i, j) ==
                      doctest::Approx(exact.vy(i, j)).epsilon(1e-10));
    }
}

// ============================================================================
// cutoff families
// ============================================================================

TEST_CASE("radial bump: plateau, support, monotonicity, seam continuity") {
    CHECK(cutoff_phi_profile(0.0) == 1.0);
    CHECK(cutoff_phi_profile(0.49) == 1.0);
    CHECK(cutoff_phi_profile(1.0) == 0.0);
    CHECK(cutoff_phi_profile(1.4) == 0.0);
    // continuity across the inner seam
    CHECK(cutoff_phi_profile(0.5 + 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
    // non-increasing along the profile
    double prev = 2.0;
    for (int q = 0; q <= 300; ++q) {
        const double v = cutoff_phi_profile(q / 300.0 * 1.2);
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
    // |d rho / d s| <= 7.82 sqrt(rho) (the localization chain rule needs it)
    for (int q = 1; q < 1000; ++q) {
        const double s = 0.5 + 0.5 * q / 1000.0;
        const double h = 1e-7;
        const double d =
            (cutoff_phi_profile(s + h) - cutoff_phi_profile(s - h)) / (2 * h);
        CHECK(std::abs(d) <=
              7.82 * std::sqrt(cutoff_phi_profile(s)) + 1e-5);
    }
}

TEST_CASE("sampled bump respects support and plateau on the grid") {
    Grid g{64, 64, 1.0, 1.0};
    const double qx = 0.5, qy = 0.5, delta = 0.3;
    const ScalarField phi = cutoff_phi(g, qx, qy, delta);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double r =
                std::hypot(g.xc(i) - qx, g.yc(j) - qy);
            if (r <= 0.5 * delta) CHECK(phi(i, j) == 1.0);
            if (r >= delta) CHECK(phi(i, j) == 0.0);
            CHECK(phi(i, j) >= 0.0);
            CHECK(phi(i, j) <= 1.0);
        }
}

TEST_CASE("bump construction refuses unresolvable radii") {
    Grid g{8, 8, 1.0, 1.0};
    CHECK_THROWS_AS(cutoff_phi(g, 0.5, 0.5, 0.2), CutoffResolutionError);
}

TEST_CASE("log-log corner profile reproduces its closed-form integrals") {
    for (const double eta : {1e-2, 1e-3, 1e-4}) {
        const PsiProfile prof = cutoff_psi(eta);
        const double il = std::abs(std::log(eta));
        CHECK(prof.int_grad_sq_r == doctest::Approx(1.0 / il).epsilon(1e-8));
        CHECK(prof.int_psi_sq_grad_sq_r ==
              doctest::Approx(2.0 / il).epsilon(1e-8));
        CHECK(prof.int_psi_sq_r > 0.0);
        CHECK(prof.int_psi_sq_r < prof.eta * prof.eta);  // support has radius eta
    }
}

TEST_CASE("corner profile values at representative radii") {
    const double eta = 1e-3;
    CHECK(psi_value(eta, eta) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(psi_value(eta, 2 * eta) == 0.0);
    // at r = eta^2 the value is exactly ln 2
    CHECK(psi_value(eta, eta * eta) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(cutoff_psi(1.5), DomainError);
}

// ============================================================================
// sensitivity tensors
// ============================================================================

TEST_CASE("2x2 spectral norms for diagonal and rotation matrices") {
    Mat2 d{3.0, 0.0, 0.0, -4.0};
    CHECK(d.spectral_norm() == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(Mat2::rotation90().spectral_norm() ==
          doctest::Approx(1.0).epsilon(1e-13));
    Mat2 shear{1.0, 1.0, 0.0, 1.0};  // singular values (1+sqrt5)/2, ...
    CHECK(shear.spectral_norm() ==
          doctest::Approx(0.5 * (1.0 + std::sqrt(5.0))).epsilon(1e-12));
}

TEST_CASE("signal-power envelope matches its formula") {
    SensitivitySpec spec;
    spec.s0 = 2.0;
    spec.s1 = 0.5;
    spec.gamma = 1.5;
    CHECK(sensitivity_envelope(spec, 1.5) ==
          doctest::Approx(2.0 / std::pow(2.0, 1.5)).epsilon(1e-14));
}

TEST_CASE("every built-in variant stays inside the envelope") {
    Grid g{8, 8, 1.0, 1.0};
    for (const char* name : {"isotropic", "rotational", "negative_semidefinite"}) {
        SensitivitySpec spec;
        spec.variant = sensitivity_variant_from_string(name);
        spec.s0 = 1.7;
        spec.s1 = 0.3;
        spec.gamma = 2.0;
        spec.angle = 0.9;
        spec.nsd_a = 1.0;
        spec.nsd_b = 2.0;
        spec.nsd_omega = 0.7;
        const SensitivityClass cls = sensitivity_classify(spec, g, 2000);
        CHECK(cls.decay_ok);
    }
}

TEST_CASE("structural classification separates the variants") {
    Grid g{8, 8, 1.0, 1.0};
    SensitivitySpec iso;
    iso.variant = SensitivityVariant::isotropic;
    iso.s1 = 0.0;
    CHECK(sensitivity_classify(iso, g).isotropic_form);

    SensitivitySpec shifted = iso;
    shifted.s1 = 0.4;
    CHECK_FALSE(sensitivity_classify(shifted, g).isotropic_form);

    SensitivitySpec nsd;
    nsd.variant = SensitivityVariant::negative_semidefinite;
    nsd.nsd_a = 1.0;
    nsd.nsd_b = 2.0;
    nsd.nsd_omega = 0.7;
    const SensitivityClass c = sensitivity_classify(nsd, g);
    CHECK(c.neg_semidef);
    CHECK(c.decay_ok);

    // a custom tensor with positive symmetric part is flagged
    SensitivitySpec custom;
    custom.variant = SensitivityVariant::custom;
    custom.custom = [](double, double, double, double) {
        return Mat2{0.5, 0.0, 0.0, 0.25};
    };
    custom.s0 = 1.0;
    custom.s1 = 0.0;
    custom.gamma = 1.0;
    const SensitivityClass cc = sensitivity_classify(custom, g);
    CHECK_FALSE(cc.neg_semidef);
}

TEST_CASE("pure rotation has a vanishing symmetric part") {
    SensitivitySpec spec;
    spec.variant = SensitivityVariant::rotational;
    spec.angle = kPi / 2.0;
    spec.s0 = 0.5;
    spec.gamma = 1.0;
    const Mat2 S = sensitivity_eval(spec, 0.3, 0.4, 1.0, 2.0);
    const Mat2 sym = S.sym();
    CHECK(std::abs(sym.a11) <= 1e-16);
    CHECK(std::abs(sym.a22) <= 1e-16);
    CHECK(std::abs(sym.a12) <= 1e-16);
    // and the full tensor still meets the envelope with equality
    CHECK(S.spectral_norm() ==
          doctest::Approx(sensitivity_envelope(spec, 2.0)).epsilon(1e-13));
}

TEST_CASE("variant names round-trip") {
    for (const char* name :
         {"isotropic", "rotational", "negative_semidefinite", "custom"}) {
        CHECK(to_string(sensitivity_variant_from_string(name)) == name);
    }
    CHECK_THROWS_AS(sensitivity_variant_from_string("sideways"), ConfigError);
}

// ============================================================================
// Krylov solver
// ============================================================================

TEST_CASE("bicgstab solves a small nonsymmetric system") {
    // 4x4 strictly diagonally dominant matrix
    const double A[4][4] = {{5, 1, 0, -1},
                            {0.5, 4, 1, 0},
                            {-1, 0.2, 6, 1},
                            {0, -0.3, 0.5, 3}};
    const std::vector<double> xref{1.0, -2.0, 0.5, 3.0};
    std::vector<double> b(4, 0.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) b[i] += A[i][j] * xref[j];

    auto apply = [&](const std::vector<double>& x, std::vector<double>& out) {
        for (int i = 0; i < 4; ++i) {
            out[i] = 0.0;
            for (int j = 0; j < 4; ++j) out[i] += A[i][j] * x[j];
        }
    };
    auto ident = [](const std::vector<double>& r, std::vector<double>& out) {
        out = r;
    };
    std::vector<double> x(4, 0.0);
    const KrylovResult res = bicgstab(apply, ident, b, x, 1e-12, 100);
    CHECK(res.converged);
    CHECK(res.rel_residual <= 1e-12);
    CHECK(res.iterations <= 20);
    CHECK_FALSE(res.residual_history.empty());
    for (int i = 0; i < 4; ++i)
        CHECK(x[i] == doctest::Approx(xref[i]).epsilon(1e-9));
}
