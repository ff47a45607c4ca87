#include <cmath>

#include "dampwave/kernels.hpp"

namespace dampwave::kernels::reference {

void laplacian(const Grid& grid, std::span<const double> u, std::span<double> out) {
  const int nx = grid.nx();
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (!grid.is_interior(idx)) {
      out[idx] = 0.0;
      continue;
    }
    out[idx] = (u[idx - 1] + u[idx + 1] + u[idx - nx] + u[idx + nx] - 4.0 * u[idx]) * inv_h2;
  }
}

void damping_substep(const Grid& grid, const DampingLaw& law, std::span<const double> a,
                     std::span<const double> phi_d, double d_factor, double tau, std::span<double> v) {
  for (std::size_t idx : grid.interior_nodes()) {
    if (a[idx] == 0.0) continue;
    const double d = phi_d.empty() ? 0.0 : d_factor * phi_d[idx];
    try {
      const double mid = solve_pointwise_implicit(law, a[idx], d, 0.5 * tau, v[idx]);
      v[idx] = 2.0 * mid - v[idx];
    } catch (SolverError& err) {
      err.node = static_cast<long>(idx);
      throw;
    }
  }
}

void kick(const Grid& grid, std::span<double> v, std::span<const double> lap, std::span<const double> phi_e,
          double e_factor, double coef) {
  for (std::size_t idx : grid.interior_nodes()) {
    const double e = phi_e.empty() ? 0.0 : e_factor * phi_e[idx];
    v[idx] += coef * (lap[idx] - e);
  }
}

void drift(const Grid& grid, std::span<double> u, std::span<const double> v, double dt) {
  for (std::size_t idx : grid.interior_nodes()) u[idx] += dt * v[idx];
}

double gradient_energy(const Grid& grid, std::span<const double> u) {
  const int nx = grid.nx();
  const int ny = grid.ny();
  // row partials summed in row order, the same grouping as the parallel path
  double acc = 0.0;
  for (int j = 0; j < ny; ++j) {
    double row = 0.0;
    for (int i = 0; i < nx; ++i) {
      const std::size_t idx = grid.index(i, j);
      if (i + 1 < nx) {
        const double dx = u[idx + 1] - u[idx];
        row += dx * dx;
      }
      if (j + 1 < ny) {
        const double dy = u[idx + nx] - u[idx];
        row += dy * dy;
      }
    }
    acc += row;
  }
  return 0.5 * acc;
}

double dot(const Grid& grid, std::span<const double> x, std::span<const double> y) {
  const int nx = grid.nx();
  double acc = 0.0;
  for (int j = 0; j < grid.ny(); ++j) {
    double row = 0.0;
    for (int i = 0; i < nx; ++i) {
      const std::size_t idx = grid.index(i, j);
      if (grid.is_interior(idx)) row += x[idx] * y[idx];
    }
    acc += row;
  }
  return acc;
}

}  // namespace dampwave::kernels::reference
