#include <exception>
#include <vector>

#include "dampwave/kernels.hpp"

namespace dampwave::kernels::parallel {

namespace {

// Sums row partials in row order so the result is independent of the
// OpenMP schedule.
template <class RowSum>
double row_reduce(int rows, RowSum&& row_sum) {
  std::vector<double> partial(static_cast<std::size_t>(rows), 0.0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < rows; ++j) partial[static_cast<std::size_t>(j)] = row_sum(j);
  double acc = 0.0;
  for (double p : partial) acc += p;
  return acc;
}

}  // namespace

void laplacian(const Grid& grid, std::span<const double> u, std::span<double> out) {
  const int nx = grid.nx();
  const int ny = grid.ny();
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t idx = grid.index(i, j);
      out[idx] = grid.is_interior(idx)
                     ? (u[idx - 1] + u[idx + 1] + u[idx - nx] + u[idx + nx] - 4.0 * u[idx]) * inv_h2
                     : 0.0;
    }
  }
}

void damping_substep(const Grid& grid, const DampingLaw& law, std::span<const double> a,
                     std::span<const double> phi_d, double d_factor, double tau, std::span<double> v) {
  const auto& nodes = grid.interior_nodes();
  const auto count = static_cast<long>(nodes.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (long k = 0; k < count; ++k) {
    const std::size_t idx = nodes[static_cast<std::size_t>(k)];
    if (a[idx] == 0.0) continue;
    const double d = phi_d.empty() ? 0.0 : d_factor * phi_d[idx];
    try {
      const double mid = solve_pointwise_implicit(law, a[idx], d, 0.5 * tau, v[idx]);
      v[idx] = 2.0 * mid - v[idx];
    } catch (SolverError& err) {
      err.node = static_cast<long>(idx);
#pragma omp critical(dampwave_kernel_failure)
      if (!failure) failure = std::current_exception();
    } catch (...) {
#pragma omp critical(dampwave_kernel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void kick(const Grid& grid, std::span<double> v, std::span<const double> lap, std::span<const double> phi_e,
          double e_factor, double coef) {
  const auto& nodes = grid.interior_nodes();
  const auto count = static_cast<long>(nodes.size());
  if (phi_e.empty()) {
#pragma omp parallel for schedule(static)
    for (long k = 0; k < count; ++k) {
      const std::size_t idx = nodes[static_cast<std::size_t>(k)];
      v[idx] += coef * lap[idx];
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (long k = 0; k < count; ++k) {
    const std::size_t idx = nodes[static_cast<std::size_t>(k)];
    v[idx] += coef * (lap[idx] - e_factor * phi_e[idx]);
  }
}

void drift(const Grid& grid, std::span<double> u, std::span<const double> v, double dt) {
  const auto& nodes = grid.interior_nodes();
  const auto count = static_cast<long>(nodes.size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < count; ++k) {
    const std::size_t idx = nodes[static_cast<std::size_t>(k)];
    u[idx] += dt * v[idx];
  }
}

double gradient_energy(const Grid& grid, std::span<const double> u) {
  const int nx = grid.nx();
  const int ny = grid.ny();
  return 0.5 * row_reduce(ny, [&](int j) {
           double acc = 0.0;
           for (int i = 0; i < nx; ++i) {
             const std::size_t idx = grid.index(i, j);
             if (i + 1 < nx) {
               const double dx = u[idx + 1] - u[idx];
               acc += dx * dx;
             }
             if (j + 1 < ny) {
               const double dy = u[idx + nx] - u[idx];
               acc += dy * dy;
             }
           }
           return acc;
         });
}

double dot(const Grid& grid, std::span<const double> x, std::span<const double> y) {
  const int nx = grid.nx();
  return row_reduce(grid.ny(), [&](int j) {
    double acc = 0.0;
    for (int i = 0; i < nx; ++i) {
      const std::size_t idx = grid.index(i, j);
      if (grid.is_interior(idx)) acc += x[idx] * y[idx];
    }
    return acc;
  });
}

}  // namespace dampwave::kernels::parallel
