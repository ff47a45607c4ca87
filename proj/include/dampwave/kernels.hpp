#pragma once

#include <span>

#include "dampwave/damping.hpp"
#include "dampwave/grid.hpp"

// Grid kernels used by the time integrator and the Poisson solver.
//
// `reference` holds plain serial loops kept as the oracle for tests and the
// benchmark baseline. `parallel` holds the OpenMP versions; their reductions
// sum per-row partials in row order, so results do not depend on the thread
// count.
namespace dampwave::kernels {

enum class Backend { reference, parallel };

namespace reference {

/// out = 5-point Laplacian of u on interior nodes, 0 elsewhere.
void laplacian(const Grid& grid, std::span<const double> u, std::span<double> out);

/// Implicit-midpoint damping update over a sub-step tau on every interior
/// node with a > 0: y = v - (tau/2) a g(y + d), v <- 2y - v,
/// with d = d_factor * phi_d.
void damping_substep(const Grid& grid, const DampingLaw& law, std::span<const double> a,
                     std::span<const double> phi_d, double d_factor, double tau, std::span<double> v);

/// v += coef * (lap - e_factor * phi_e) on interior nodes.
void kick(const Grid& grid, std::span<double> v, std::span<const double> lap, std::span<const double> phi_e,
          double e_factor, double coef);

/// u += dt * v on interior nodes.
void drift(const Grid& grid, std::span<double> u, std::span<const double> v, double dt);

/// 1/2 sum over lattice edges of (u_q - u_p)^2 (forward differences); equals
/// 1/2 h^2 sum |grad_h u|^2.
double gradient_energy(const Grid& grid, std::span<const double> u);

/// sum over interior nodes of x*y (no h^2 weight).
double dot(const Grid& grid, std::span<const double> x, std::span<const double> y);

}  // namespace reference

namespace parallel {

void laplacian(const Grid& grid, std::span<const double> u, std::span<double> out);
void damping_substep(const Grid& grid, const DampingLaw& law, std::span<const double> a,
                     std::span<const double> phi_d, double d_factor, double tau, std::span<double> v);
void kick(const Grid& grid, std::span<double> v, std::span<const double> lap, std::span<const double> phi_e,
          double e_factor, double coef);
void drift(const Grid& grid, std::span<double> u, std::span<const double> v, double dt);
double gradient_energy(const Grid& grid, std::span<const double> u);
double dot(const Grid& grid, std::span<const double> x, std::span<const double> y);

}  // namespace parallel

/// Runtime dispatch over the two implementations.
struct Ops {
  Backend backend = Backend::parallel;

  void laplacian(const Grid& g, std::span<const double> u, std::span<double> out) const {
    backend == Backend::parallel ? parallel::laplacian(g, u, out) : reference::laplacian(g, u, out);
  }
  void damping_substep(const Grid& g, const DampingLaw& law, std::span<const double> a,
                       std::span<const double> phi_d, double d_factor, double tau, std::span<double> v) const {
    backend == Backend::parallel ? parallel::damping_substep(g, law, a, phi_d, d_factor, tau, v)
                                 : reference::damping_substep(g, law, a, phi_d, d_factor, tau, v);
  }
  void kick(const Grid& g, std::span<double> v, std::span<const double> lap, std::span<const double> phi_e,
            double e_factor, double coef) const {
    backend == Backend::parallel ? parallel::kick(g, v, lap, phi_e, e_factor, coef)
                                 : reference::kick(g, v, lap, phi_e, e_factor, coef);
  }
  void drift(const Grid& g, std::span<double> u, std::span<const double> v, double dt) const {
    backend == Backend::parallel ? parallel::drift(g, u, v, dt) : reference::drift(g, u, v, dt);
  }
  double gradient_energy(const Grid& g, std::span<const double> u) const {
    return backend == Backend::parallel ? parallel::gradient_energy(g, u) : reference::gradient_energy(g, u);
  }
  double dot(const Grid& g, std::span<const double> x, std::span<const double> y) const {
    return backend == Backend::parallel ? parallel::dot(g, x, y) : reference::dot(g, x, y);
  }
};

}  // namespace dampwave::kernels
