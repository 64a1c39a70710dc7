#include "chemoflow/grid.hpp"

#include <cmath>
#include <string>

namespace chemoflow {

Grid::Grid(int nx_, int ny_, double lx_, double ly_)
    : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
    // Geometry alone works on any positive cell count; simulation configs
    // enforce their own >= 8 floor in validate(), and the spectral solver
    // checks what its transforms need.
    if (nx < 1 || ny < 1)
        throw ConfigError("grid: nx and ny must be >= 1, got " +
                          std::to_string(nx) + "x" + std::to_string(ny));
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
        throw ConfigError("grid: box lengths must be positive and finite");
}

double Grid::diameter() const { return std::hypot(lx, ly); }

void FaceField::zero_wall_normal() {
    for (int j = 0; j < grid.ny; ++j) {
        u[uidx(0, j)] = 0.0;
        u[uidx(grid.nx, j)] = 0.0;
    }
    for (int i = 0; i < grid.nx; ++i) {
        v[vidx(i, 0)] = 0.0;
        v[vidx(i, grid.ny)] = 0.0;
    }
}

bool FaceField::wall_normal_is_zero(double tol) const {
    for (int j = 0; j < grid.ny; ++j)
        if (std::abs(u[uidx(0, j)]) > tol || std::abs(u[uidx(grid.nx, j)]) > tol)
            return false;
    for (int i = 0; i < grid.nx; ++i)
        if (std::abs(v[vidx(i, 0)]) > tol || std::abs(v[vidx(i, grid.ny)]) > tol)
            return false;
    return true;
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (a != b) throw DomainError(std::string(what) + ": grid mismatch");
}

void require_finite(const ScalarField& f, const char* what) {
    for (double x : f.v)
        if (!std::isfinite(x))
            throw DomainError(std::string(what) + ": non-finite value in field");
}

void require_finite(const FaceField& f, const char* what) {
    for (double x : f.u)
        if (!std::isfinite(x))
            throw DomainError(std::string(what) + ": non-finite value in face field");
    for (double x : f.v)
        if (!std::isfinite(x))
            throw DomainError(std::string(what) + ": non-finite value in face field");
}

}  // namespace chemoflow
