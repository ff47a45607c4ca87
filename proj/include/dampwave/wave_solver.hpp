#pragma once

#include <string>
#include <vector>

#include "dampwave/damping.hpp"
#include "dampwave/disturbance.hpp"
#include "dampwave/geometry.hpp"
#include "dampwave/grid.hpp"
#include "dampwave/kernels.hpp"

namespace dampwave {

/// Initial data rule for u^0 or u^1. Rules are smooth in the continuum.
struct InitialRule {
  enum class Kind { zero, eigenmode, gaussian };

  Kind kind = Kind::zero;
  int k = 1;
  int l = 1;
  double amplitude = 1.0;
  Point center{0.5, 0.5};
  double width = 0.1;

  static InitialRule zero() { return {}; }
  static InitialRule eigenmode(int k, int l, double amplitude);
  static InitialRule gaussian(Point center, double width, double amplitude);

  Field sample(const Grid& grid) const;
  std::string describe() const;
};

struct SimConfig {
  static constexpr double cfl_safety = 0.9;

  Grid grid;
  Field a;  ///< localization a(x) >= 0
  DampingLaw law = DampingLaw::linear(1.0);
  DisturbanceSpec disturbance;
  double dt = 0.0;
  double horizon = 0.0;
  int record_stride = 1;
  InitialRule initial_u;
  InitialRule initial_v;
  bool store_snapshots = false;
  kernels::Backend backend = kernels::Backend::parallel;

  /// Largest admissible step, cfl_safety * h / sqrt(2).
  double max_dt() const;
  /// Throws ConfigError on CFL violation or inconsistent fields.
  void validate() const;
};

struct WaveState {
  Field u;
  Field v;  ///< u_t
  double t = 0.0;
  long step_index = 0;
};

/// Sampled diagnostics of one run. Ew and residual are NaN at the first and
/// last samples (centred time differences).
struct RunRecord {
  std::vector<double> t;
  std::vector<double> E;
  std::vector<double> Ew;
  std::vector<double> D;
  std::vector<double> residual;
  std::vector<double> l2_u;
  std::vector<double> l2_ut;
  std::vector<double> h1_ut;
  std::vector<WaveState> snapshots;  ///< one per sample when requested
  std::vector<std::string> warnings;
  double dt = 0.0;

  std::size_t size() const { return t.size(); }
};

/// Time integrator for u_tt - Lap u = -a g(u_t + d) - e with homogeneous
/// Dirichlet data. One step is a Strang splitting: implicit-midpoint damping
/// over dt/2, velocity Verlet for the conservative part (e enters the
/// kicks), implicit-midpoint damping over dt/2.
class WaveSolver {
 public:
  explicit WaveSolver(SimConfig config);

  const SimConfig& config() const { return config_; }
  const Grid& grid() const { return config_.grid; }
  /// Step actually used: horizon / ceil(horizon / config.dt).
  double dt() const { return dt_; }
  long steps() const { return steps_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  WaveState initial_state() const;
  void step(WaveState& state) const;
  RunRecord run() const;

  double energy(const WaveState& state) const;
  /// int a u_t g(u_t + d) + int u_t e at time state.t.
  double dissipation(const WaveState& state) const;

  double d_at(std::size_t idx, double t) const;
  double e_at(std::size_t idx, double t) const;

 private:
  SimConfig config_;
  kernels::Ops ops_;
  Field phi_d_;
  Field phi_e_;
  double dt_ = 0.0;
  long steps_ = 0;
  std::vector<std::string> warnings_;
};

WaveState init_state(const SimConfig& config);
WaveState step(const WaveState& state, const SimConfig& config);
RunRecord run(const SimConfig& config);

/// 1/2 h^2 sum (|grad_h u|^2 + v^2) with forward differences.
double energy(const Grid& grid, const WaveState& state);

/// |centred dE/dt + D| at an interior sample index.
double energy_identity_residual(const RunRecord& record, std::size_t index);

struct PoissonResult {
  Field z;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Solves Lap_h z = rhs with z = 0 on the boundary by conjugate gradients on
/// -Lap_h; relative residual <= 1e-10, at most 10 * interior-count
/// iterations (SolverError with the residual history otherwise).
PoissonResult solve_poisson(const Grid& grid, const Field& rhs,
                            kernels::Backend backend = kernels::Backend::parallel);

}  // namespace dampwave
