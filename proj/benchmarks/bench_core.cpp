// ============================================================================
// microbenchmarks for the hot kernels: stencil apply, spectral solve,
// transport step, flow step, full signal solve
// ============================================================================

#include <benchmark/benchmark.h>

#include <cmath>

#include "chemoflow/elliptic.hpp"
#include "chemoflow/fluid.hpp"
#include "chemoflow/ops.hpp"
#include "chemoflow/sensitivity.hpp"
#include "chemoflow/spectral.hpp"
#include "chemoflow/transport.hpp"

using namespace chemoflow;

namespace {

ScalarField bump_field(const Grid& g) {
    ScalarField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.xc(i) - 0.4, y = g.yc(j) - 0.6;
            f(i, j) = 1.0 + 3.0 * std::exp(-40.0 * (x * x + y * y));
        }
    return f;
}

MacVelocity vortex(const Grid& g) {
    MacVelocity u(g);
    const double pi = 3.14159265358979323846;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i)
            u.ux(i, j) = 0.2 * std::sin(pi * g.xf(i)) * std::cos(pi * g.yc(j));
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            u.vy(i, j) = -0.2 * std::cos(pi * g.xc(i)) * std::sin(pi * g.yf(j));
    u.zero_wall_normal();
    return u;
}

void bm_laplacian(benchmark::State& state) {
    Grid g{int(state.range(0)), int(state.range(0)), 1.0, 1.0};
    const ScalarField f = bump_field(g);
    for (auto _ : state) {
        ScalarField lap = laplacian_neumann(f);
        benchmark::DoNotOptimize(lap.v.data());
    }
    state.SetItemsProcessed(state.iterations() * g.ncells());
}

void bm_helmholtz_cells(benchmark::State& state) {
    Grid g{int(state.range(0)), int(state.range(0)), 1.0, 1.0};
    SpectralSolver fft(g);
    const ScalarField f = bump_field(g);
    for (auto _ : state) {
        ScalarField c = fft.helmholtz_cells(1.0, 1.0, f);
        benchmark::DoNotOptimize(c.v.data());
    }
    state.SetItemsProcessed(state.iterations() * g.ncells());
}

void bm_advance_cells(benchmark::State& state) {
    Grid g{int(state.range(0)), int(state.range(0)), 1.0, 1.0};
    SpectralSolver fft(g);
    const ScalarField n = bump_field(g);
    const MacVelocity w = vortex(g);
    for (auto _ : state) {
        ScalarField next = advance_cells(n, w, 1e-3, fft);
        benchmark::DoNotOptimize(next.v.data());
    }
    state.SetItemsProcessed(state.iterations() * g.ncells());
}

void bm_ns_step(benchmark::State& state) {
    Grid g{int(state.range(0)), int(state.range(0)), 1.0, 1.0};
    SpectralSolver fft(g);
    const ScalarField n = bump_field(g);
    ScalarField phi(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) phi(i, j) = 0.1 * g.yc(j);
    const MacVelocity u0 = vortex(g);
    ScalarField p(g);
    for (auto _ : state) {
        MacVelocity u = u0;
        ns_step(u, p, n, phi, 1e-3, fft);
        benchmark::DoNotOptimize(u.u.data());
    }
    state.SetItemsProcessed(state.iterations() * g.ncells());
}

void bm_solve_signal(benchmark::State& state) {
    Grid g{int(state.range(0)), int(state.range(0)), 1.0, 1.0};
    SpectralSolver fft(g);
    const ScalarField n = bump_field(g);
    const MacVelocity u = vortex(g);
    for (auto _ : state) {
        ScalarField c = solve_signal(n, u, fft, 1e-10);
        benchmark::DoNotOptimize(c.v.data());
    }
    state.SetItemsProcessed(state.iterations() * g.ncells());
}

}  // namespace

BENCHMARK(bm_laplacian)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(bm_helmholtz_cells)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(bm_advance_cells)->Arg(64)->Arg(128);
BENCHMARK(bm_ns_step)->Arg(64)->Arg(128);
BENCHMARK(bm_solve_signal)->Arg(64)->Arg(128);

BENCHMARK_MAIN();
