#pragma once

#include <cstddef>
#include <vector>

#include "chemoflow/errors.hpp"

namespace chemoflow {

// ============================================================================
// Uniform cell-centered grid on the rectangle [0,Lx] x [0,Ly].
//
// Scalars (cell density n, signal c, pressure p) live at cell centers
// ((i+1/2)hx, (j+1/2)hy).  Vector quantities (velocity, fluxes, gradients)
// live on a staggered (MAC) arrangement: x-components on vertical faces
// (i*hx, (j+1/2)hy), y-components on horizontal faces.
// ============================================================================
struct Grid {
    int nx = 0;
    int ny = 0;
    double lx = 0.0;
    double ly = 0.0;

    Grid() = default;
    Grid(int nx_, int ny_, double lx_, double ly_);

    double hx() const { return lx / nx; }
    double hy() const { return ly / ny; }
    double cell_area() const { return hx() * hy(); }
    double area() const { return lx * ly; }
    double diameter() const;  // diagonal of the rectangle
    std::size_t ncells() const { return std::size_t(nx) * std::size_t(ny); }

    // coordinates
    double xc(int i) const { return (i + 0.5) * hx(); }  // cell center
    double yc(int j) const { return (j + 0.5) * hy(); }
    double xf(int i) const { return i * hx(); }           // face position
    double yf(int j) const { return j * hy(); }

    bool operator==(const Grid& o) const {
        return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

// ----------------------------------------------------------------------------
// Cell-centered scalar field, row-major with x fastest.
// ----------------------------------------------------------------------------
struct ScalarField {
    Grid grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0)
        : grid(g), v(g.ncells(), fill) {}

    std::size_t idx(int i, int j) const { return std::size_t(j) * grid.nx + i; }
    double& operator()(int i, int j) { return v[idx(i, j)]; }
    double operator()(int i, int j) const { return v[idx(i, j)]; }
    std::size_t size() const { return v.size(); }
};

// ----------------------------------------------------------------------------
// Face-centered vector field (MAC layout).
//   u: (nx+1) x ny   values on vertical faces, u(0,.) and u(nx,.) are on the
//                    left/right walls;
//   v: nx x (ny+1)   values on horizontal faces, v(.,0) and v(.,ny) on the
//                    bottom/top walls.
// For velocities the wall-normal entries are identically zero (impermeable,
// no-slip box); gradients of Neumann scalars also vanish there.
// ----------------------------------------------------------------------------
struct FaceField {
    Grid grid;
    std::vector<double> u;  // x-component
    std::vector<double> v;  // y-component

    FaceField() = default;
    explicit FaceField(const Grid& g, double fill = 0.0)
        : grid(g),
          u(std::size_t(g.nx + 1) * g.ny, fill),
          v(std::size_t(g.nx) * (g.ny + 1), fill) {}

    std::size_t uidx(int i, int j) const { return std::size_t(j) * (grid.nx + 1) + i; }
    std::size_t vidx(int i, int j) const { return std::size_t(j) * grid.nx + i; }

    double& ux(int i, int j) { return u[uidx(i, j)]; }
    double ux(int i, int j) const { return u[uidx(i, j)]; }
    double& vy(int i, int j) { return v[vidx(i, j)]; }
    double vy(int i, int j) const { return v[vidx(i, j)]; }

    void zero_wall_normal();              // clamp wall-normal entries to 0
    bool wall_normal_is_zero(double tol = 0.0) const;
};

// A velocity field is a FaceField whose wall-normal entries stay pinned at 0.
using MacVelocity = FaceField;

void require_same_grid(const Grid& a, const Grid& b, const char* what);
void require_finite(const ScalarField& f, const char* what);
void require_finite(const FaceField& f, const char* what);

}  // namespace chemoflow
