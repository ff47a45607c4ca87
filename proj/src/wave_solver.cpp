#include "dampwave/wave_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dampwave/error.hpp"

namespace dampwave {

InitialRule InitialRule::eigenmode(int k, int l, double amplitude) {
  if (k < 1 || l < 1) throw ConfigError("eigenmode indices must be >= 1");
  InitialRule r;
  r.kind = Kind::eigenmode;
  r.k = k;
  r.l = l;
  r.amplitude = amplitude;
  return r;
}

InitialRule InitialRule::gaussian(Point center, double width, double amplitude) {
  if (!(width > 0.0)) throw ConfigError("gaussian width must be positive");
  InitialRule r;
  r.kind = Kind::gaussian;
  r.center = center;
  r.width = width;
  r.amplitude = amplitude;
  return r;
}

Field InitialRule::sample(const Grid& grid) const {
  switch (kind) {
    case Kind::zero:
      return grid.zeros();
    case Kind::eigenmode:
      return SpaceProfile::eigenmode(k, l, amplitude).sample(grid);
    case Kind::gaussian:
      return SpaceProfile::gaussian(center, width, amplitude).sample(grid);
  }
  return grid.zeros();
}

std::string InitialRule::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::zero:
      os << "zero";
      break;
    case Kind::eigenmode:
      os << "eigenmode(" << k << "," << l << "," << amplitude << ")";
      break;
    case Kind::gaussian:
      os << "gaussian(" << center.x << "," << center.y << "," << width << "," << amplitude << ")";
      break;
  }
  return os.str();
}

double SimConfig::max_dt() const { return cfl_safety * grid.spacing() / std::numbers::sqrt2; }

void SimConfig::validate() const {
  if (grid.size() == 0) throw ConfigError("simulation grid is empty");
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (dt > max_dt() * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "CFL violation: dt = " << dt << " exceeds " << cfl_safety << " h/sqrt(2) = " << max_dt();
    throw ConfigError(os.str());
  }
  if (!(horizon >= 0.0)) throw ConfigError("horizon must be non-negative");
  if (record_stride < 1) throw ConfigError("record stride must be >= 1");
  if (a.size() != grid.size()) throw ConfigError("localization field does not match the grid");
  for (double x : a) {
    if (!(x >= 0.0)) throw ConfigError("localization field must be non-negative");
  }
}

WaveSolver::WaveSolver(SimConfig config) : config_(std::move(config)) {
  config_.validate();
  ops_.backend = config_.backend;
  if (config_.disturbance.d_active()) phi_d_ = config_.disturbance.d.space.sample(config_.grid);
  if (config_.disturbance.e_active()) phi_e_ = config_.disturbance.e.space.sample(config_.grid);

  if (config_.horizon > 0.0) {
    steps_ = static_cast<long>(std::ceil(config_.horizon / config_.dt - 1e-9));
    steps_ = std::max(1L, steps_);
    dt_ = config_.horizon / static_cast<double>(steps_);
  } else {
    dt_ = config_.dt;
  }

  for (const InitialRule* rule : {&config_.initial_u, &config_.initial_v}) {
    if (rule->kind != InitialRule::Kind::gaussian) continue;
    const Field f = rule->sample(config_.grid);
    double peak = 0.0;
    for (double x : f) peak = std::max(peak, std::abs(x));
    if (peak < 1e-6 * std::abs(rule->amplitude)) {
      warnings_.push_back("initial gaussian " + rule->describe() + " is negligible on the grid");
    }
  }
}

double WaveSolver::d_at(std::size_t idx, double t) const {
  if (phi_d_.empty()) return 0.0;
  return config_.disturbance.scale * config_.disturbance.d.time.value(t) * phi_d_[idx];
}

double WaveSolver::e_at(std::size_t idx, double t) const {
  if (phi_e_.empty()) return 0.0;
  return config_.disturbance.scale * config_.disturbance.e.time.value(t) * phi_e_[idx];
}

WaveState WaveSolver::initial_state() const {
  WaveState s;
  s.u = config_.initial_u.sample(config_.grid);
  s.v = config_.initial_v.sample(config_.grid);
  return s;
}

void WaveSolver::step(WaveState& state) const {
  const Grid& g = config_.grid;
  const DisturbanceSpec& dist = config_.disturbance;
  const double dt = dt_;
  const double t0 = state.t;
  const double t1 = t0 + dt;
  const double half = 0.5 * dt;
  const double s = dist.scale;

  auto d_factor = [&](double t) { return s * dist.d.time.value(t); };
  auto e_factor = [&](double t) { return s * dist.e.time.value(t); };

  // damping over [t0, t0 + dt/2]
  ops_.damping_substep(g, config_.law, config_.a, phi_d_, d_factor(t0 + 0.25 * dt), half, state.v);

  Field lap(g.size());
  ops_.laplacian(g, state.u, lap);
  ops_.kick(g, state.v, lap, phi_e_, e_factor(t0), half);
  ops_.drift(g, state.u, state.v, dt);
  ops_.laplacian(g, state.u, lap);
  ops_.kick(g, state.v, lap, phi_e_, e_factor(t1), half);

  // damping over [t1 - dt/2, t1]
  ops_.damping_substep(g, config_.law, config_.a, phi_d_, d_factor(t1 - 0.25 * dt), half, state.v);

  state.t = t1;
  state.step_index += 1;
}

double WaveSolver::energy(const WaveState& state) const {
  const double h = config_.grid.spacing();
  return ops_.gradient_energy(config_.grid, state.u) + 0.5 * h * h * ops_.dot(config_.grid, state.v, state.v);
}

double WaveSolver::dissipation(const WaveState& state) const {
  const Grid& g = config_.grid;
  double acc = 0.0;
  for (std::size_t idx : g.interior_nodes()) {
    const double v = state.v[idx];
    const double a = config_.a[idx];
    if (a != 0.0) acc += a * v * config_.law.g(v + d_at(idx, state.t));
    if (!phi_e_.empty()) acc += v * e_at(idx, state.t);
  }
  return acc * g.spacing() * g.spacing();
}

RunRecord WaveSolver::run() const {
  const Grid& g = config_.grid;
  const double h2 = g.spacing() * g.spacing();
  RunRecord rec;
  rec.dt = dt_;
  rec.warnings = warnings_;

  WaveState state = initial_state();
  Field prev_v;
  Field cur_v;
  double prev_t = 0.0;
  double cur_t = 0.0;
  double cur_grad = 0.0;

  auto sample = [&]() {
    const double grad_v = ops_.gradient_energy(g, state.v);  // 1/2 |grad v|^2
    rec.t.push_back(state.t);
    rec.E.push_back(energy(state));
    rec.D.push_back(dissipation(state));
    rec.l2_u.push_back(std::sqrt(h2 * ops_.dot(g, state.u, state.u)));
    rec.l2_ut.push_back(std::sqrt(h2 * ops_.dot(g, state.v, state.v)));
    rec.h1_ut.push_back(std::sqrt(2.0 * grad_v));
    rec.Ew.push_back(std::numeric_limits<double>::quiet_NaN());
    rec.residual.push_back(std::numeric_limits<double>::quiet_NaN());
    if (config_.store_snapshots) rec.snapshots.push_back(state);

    // E_w for the previous sample: w = u_t, w_t by centred differences.
    if (!prev_v.empty()) {
      const double hm = cur_t - prev_t;
      const double hp = state.t - cur_t;
      const double cm = -hp / (hm * (hm + hp));
      const double c0 = (hp - hm) / (hm * hp);
      const double cp = hm / (hp * (hm + hp));
      double acc = 0.0;
      for (std::size_t idx : g.interior_nodes()) {
        const double wt = cm * prev_v[idx] + c0 * cur_v[idx] + cp * state.v[idx];
        acc += wt * wt;
      }
      rec.Ew[rec.Ew.size() - 2] = cur_grad + 0.5 * h2 * acc;
    }
    prev_v = std::move(cur_v);
    prev_t = cur_t;
    cur_v = state.v;
    cur_t = state.t;
    cur_grad = grad_v;
  };

  sample();
  for (long n = 1; n <= steps_; ++n) {
    step(state);
    if (n % config_.record_stride == 0 || n == steps_) sample();
  }
  for (std::size_t k = 1; k + 1 < rec.size(); ++k) rec.residual[k] = energy_identity_residual(rec, k);
  return rec;
}

WaveState init_state(const SimConfig& config) { return WaveSolver(config).initial_state(); }

WaveState step(const WaveState& state, const SimConfig& config) {
  WaveState next = state;
  WaveSolver(config).step(next);
  return next;
}

RunRecord run(const SimConfig& config) { return WaveSolver(config).run(); }

double energy(const Grid& grid, const WaveState& state) {
  const double h = grid.spacing();
  return kernels::reference::gradient_energy(grid, state.u) +
         0.5 * h * h * kernels::reference::dot(grid, state.v, state.v);
}

double energy_identity_residual(const RunRecord& record, std::size_t index) {
  if (index == 0 || index + 1 >= record.size()) {
    throw std::out_of_range("energy identity residual needs an interior sample");
  }
  const double hm = record.t[index] - record.t[index - 1];
  const double hp = record.t[index + 1] - record.t[index];
  // three-point derivative, second order on uneven spacing
  const double dEdt = (hm * hm * record.E[index + 1] - hp * hp * record.E[index - 1] +
                       (hp * hp - hm * hm) * record.E[index]) /
                      (hm * hp * (hm + hp));
  return std::abs(dEdt + record.D[index]);
}

PoissonResult solve_poisson(const Grid& grid, const Field& rhs, kernels::Backend backend) {
  if (rhs.size() != grid.size()) throw ConfigError("Poisson right-hand side does not match the grid");
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (!grid.is_interior(idx) && rhs[idx] != 0.0) {
      throw ConfigError("Poisson right-hand side must vanish on boundary nodes");
    }
  }
  const kernels::Ops ops{backend};
  const std::size_t n = grid.size();

  PoissonResult result;
  result.z.assign(n, 0.0);

  // A = -Lap_h is SPD on the interior; solve A z = -rhs.
  Field b(n, 0.0);
  for (std::size_t idx : grid.interior_nodes()) b[idx] = -rhs[idx];
  const double b_norm = std::sqrt(ops.dot(grid, b, b));
  if (b_norm == 0.0) return result;

  Field r = b;
  Field p = r;
  Field ap(n, 0.0);
  double rr = ops.dot(grid, r, r);
  const long cap = 10 * static_cast<long>(grid.interior_count());
  std::vector<double> history;
  for (long it = 1; it <= cap; ++it) {
    ops.laplacian(grid, p, ap);
    for (std::size_t idx : grid.interior_nodes()) ap[idx] = -ap[idx];
    const double alpha = rr / ops.dot(grid, p, ap);
    for (std::size_t idx : grid.interior_nodes()) {
      result.z[idx] += alpha * p[idx];
      r[idx] -= alpha * ap[idx];
    }
    const double rr_next = ops.dot(grid, r, r);
    const double rel = std::sqrt(rr_next) / b_norm;
    history.push_back(rel);
    if (rel <= 1e-10) {
      result.iterations = static_cast<int>(it);
      result.relative_residual = rel;
      return result;
    }
    const double beta = rr_next / rr;
    for (std::size_t idx : grid.interior_nodes()) p[idx] = r[idx] + beta * p[idx];
    rr = rr_next;
  }
  throw SolverError("Poisson CG did not reach relative residual 1e-10", std::move(history));
}

}  // namespace dampwave
