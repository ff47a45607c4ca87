#include "dampwave/disturbance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "dampwave/error.hpp"

namespace dampwave {

TimeProfile TimeProfile::exp_decay(double lambda, double t_off) {
  if (!(lambda >= 0.0)) throw ConfigError("exp-decay rate must be non-negative");
  TimeProfile p;
  p.kind = Kind::exp_decay;
  p.lambda = lambda;
  p.t_off = t_off;
  return p;
}

TimeProfile TimeProfile::pulse(double t0, double t1) {
  if (!(t1 > t0) || t0 < 0.0) throw ConfigError("pulse window must satisfy 0 <= t0 < t1");
  TimeProfile p;
  p.kind = Kind::pulse;
  p.t0 = t0;
  p.t1 = t1;
  return p;
}

double TimeProfile::value(double t) const {
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::exp_decay:
      return t < t_off ? std::exp(-lambda * t) : 0.0;
    case Kind::pulse:
      if (t <= t0 || t >= t1) return 0.0;
      return 1.0 - std::cos(2.0 * std::numbers::pi * (t - t0) / (t1 - t0));
  }
  return 0.0;
}

double TimeProfile::derivative(double t) const {
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::exp_decay:
      return t < t_off ? -lambda * std::exp(-lambda * t) : 0.0;
    case Kind::pulse: {
      if (t <= t0 || t >= t1) return 0.0;
      const double w = 2.0 * std::numbers::pi / (t1 - t0);
      return w * std::sin(w * (t - t0));
    }
  }
  return 0.0;
}

double TimeProfile::support_end() const {
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::exp_decay:
      return t_off;
    case Kind::pulse:
      return t1;
  }
  return 0.0;
}

std::string TimeProfile::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::zero:
      os << "zero";
      break;
    case Kind::exp_decay:
      os << "exp(" << lambda;
      if (std::isfinite(t_off)) os << "," << t_off;
      os << ")";
      break;
    case Kind::pulse:
      os << "pulse(" << t0 << "," << t1 << ")";
      break;
  }
  return os.str();
}

SpaceProfile SpaceProfile::gaussian(Point center, double width, double amplitude) {
  if (!(width > 0.0)) throw ConfigError("gaussian width must be positive");
  SpaceProfile s;
  s.kind = Kind::gaussian;
  s.center = center;
  s.width = width;
  s.amplitude = amplitude;
  return s;
}

SpaceProfile SpaceProfile::eigenmode(int k, int l, double amplitude) {
  if (k < 1 || l < 1) throw ConfigError("eigenmode indices must be >= 1");
  SpaceProfile s;
  s.kind = Kind::eigenmode;
  s.k = k;
  s.l = l;
  s.amplitude = amplitude;
  return s;
}

SpaceProfile SpaceProfile::constant(double value) {
  SpaceProfile s;
  s.kind = Kind::constant;
  s.value = value;
  return s;
}

double SpaceProfile::at(Point p, const Grid& grid) const {
  switch (kind) {
    case Kind::gaussian: {
      const Point r = p - center;
      return amplitude * std::exp(-dot(r, r) / (2.0 * width * width));
    }
    case Kind::eigenmode: {
      const Point lo = grid.lower();
      const Point hi = grid.upper();
      const double pi = std::numbers::pi;
      return amplitude * std::sin(k * pi * (p.x - lo.x) / (hi.x - lo.x)) *
             std::sin(l * pi * (p.y - lo.y) / (hi.y - lo.y));
    }
    case Kind::constant:
      return value;
  }
  return 0.0;
}

Field SpaceProfile::sample(const Grid& grid) const {
  Field f = grid.zeros();
  for (std::size_t idx : grid.interior_nodes()) f[idx] = at(grid.node(idx), grid);
  return f;
}

std::string SpaceProfile::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::gaussian:
      os << "gaussian(" << center.x << "," << center.y << "," << width << "," << amplitude << ")";
      break;
    case Kind::eigenmode:
      os << "eigenmode(" << k << "," << l << "," << amplitude << ")";
      break;
    case Kind::constant:
      os << "constant(" << value << ")";
      break;
  }
  return os.str();
}

namespace {

Field channel_field(const ChannelRule& rule, double factor, const Grid& grid) {
  if (rule.is_zero() || factor == 0.0) return grid.zeros();
  Field f = rule.space.sample(grid);
  for (double& x : f) x *= factor;
  return f;
}

}  // namespace

Field eval_d(const DisturbanceSpec& spec, double t, const Grid& grid) {
  return channel_field(spec.d, spec.scale * spec.d.time.value(t), grid);
}

Field eval_e(const DisturbanceSpec& spec, double t, const Grid& grid) {
  return channel_field(spec.e, spec.scale * spec.e.time.value(t), grid);
}

Field eval_d_t(const DisturbanceSpec& spec, double t, const Grid& grid) {
  return channel_field(spec.d, spec.scale * spec.d.time.derivative(t), grid);
}

Field eval_e_t(const DisturbanceSpec& spec, double t, const Grid& grid) {
  return channel_field(spec.e, spec.scale * spec.e.time.derivative(t), grid);
}

namespace {

// Trapezoid integral of a scalar function over [0, t] with step <= dt.
template <class F>
double trapezoid(F&& f, double t, double dt) {
  if (t <= 0.0) return 0.0;
  const auto n = static_cast<long>(std::ceil(t / dt - 1e-9));
  const long steps = std::max(1L, n);
  const double step = t / static_cast<double>(steps);
  double acc = 0.5 * (f(0.0) + f(t));
  for (long k = 1; k < steps; ++k) acc += f(step * static_cast<double>(k));
  return acc * step;
}

}  // namespace

Field accumulate_dbar(const DisturbanceSpec& spec, double t, double dt_quadrature, const Grid& grid) {
  if (!(dt_quadrature > 0.0)) throw ConfigError("quadrature step must be positive");
  if (spec.d.is_zero()) return grid.zeros();
  const double integral = trapezoid([&](double s) { return spec.d.time.value(s); }, t, dt_quadrature);
  return channel_field(spec.d, spec.scale * integral, grid);
}

namespace {

// h^2 * sum |phi|^r over interior nodes
double moment(const Field& phi, const Grid& grid, double r) {
  const double w = grid.spacing() * grid.spacing();
  double acc = 0.0;
  for (std::size_t idx : grid.interior_nodes()) acc += std::pow(std::abs(phi[idx]), r);
  return acc * w;
}

}  // namespace

BudgetReport compute_budgets(const DisturbanceSpec& spec, const DampingLaw& law, double horizon,
                             const Grid& grid, double dt_quadrature) {
  if (!(horizon > 0.0)) throw ConfigError("budget horizon must be positive");
  if (!(dt_quadrature > 0.0)) throw ConfigError("quadrature step must be positive");

  BudgetReport report;
  report.horizon = horizon;
  const double q = law.q();
  const double m = law.m();
  const double p = select_p(m);
  report.p = p;

  const auto n = static_cast<long>(std::ceil(horizon / dt_quadrature - 1e-9));
  const long steps = std::max(1L, n);
  const double step = horizon / static_cast<double>(steps);

  // Separable rules: every space integral is |T|^a |T'|^b times a fixed
  // grid moment of Phi.
  struct Budget {
    const char* name;
    double* out;
    std::function<double(double)> integrand;
  };
  std::vector<Budget> budgets;

  if (spec.d_active()) {
    const Field phi = spec.d.space.sample(grid);
    const double s = spec.scale;
    const double m1 = moment(phi, grid, 1.0);
    const double m2 = moment(phi, grid, 2.0);
    const double m2q = moment(phi, grid, 2.0 * q);
    const double mm2 = moment(phi, grid, m + 2.0);
    const double r = 2.0 * p / (p - 1.0);
    const double mr = moment(phi, grid, r);
    const TimeProfile tp = spec.d.time;
    auto D = [tp, s](double t) { return std::abs(s * tp.value(t)); };
    auto Dt = [tp, s](double t) { return std::abs(s * tp.derivative(t)); };
    budgets.push_back({"C1_d", &report.c1_d,
                       [=](double t) { return D(t) * D(t) * m2 + std::pow(D(t), 2.0 * q) * m2q; }});
    budgets.push_back({"C2_d", &report.c2_d, [=](double t) { return std::pow(D(t), m) * Dt(t) * Dt(t) * mm2; }});
    budgets.push_back({"C3_d", &report.c3_d, [=](double t) { return Dt(t) * Dt(t) * m2; }});
    budgets.push_back({"C4_d", &report.c4_d,
                       [=](double t) { return std::pow(std::pow(Dt(t), r) * mr, (p - 1.0) / p); }});
    budgets.push_back({"C5_d", &report.c5_d, [=](double t) { return D(t) * std::sqrt(m2); }});
    budgets.push_back({"C6_d", &report.c6_d, [=](double t) { return D(t) * m1; }});
  }
  if (spec.e_active()) {
    const Field phi = spec.e.space.sample(grid);
    const double s = spec.scale;
    const double m2 = moment(phi, grid, 2.0);
    const TimeProfile tp = spec.e.time;
    auto E = [tp, s](double t) { return std::abs(s * tp.value(t)); };
    auto Et = [tp, s](double t) { return std::abs(s * tp.derivative(t)); };
    budgets.push_back({"Cbar1_e", &report.cbar1_e, [=](double t) { return E(t) * E(t) * m2; }});
    budgets.push_back({"Cbar2_e", &report.cbar2_e, [=](double t) { return E(t) * std::sqrt(m2); }});
    budgets.push_back({"Cbar3_e", &report.cbar3_e, [=](double t) { return Et(t) * std::sqrt(m2); }});
  }

  for (auto& b : budgets) {
    double acc = 0.5 * (b.integrand(0.0) + b.integrand(horizon));
    for (long k = 1; k < steps; ++k) acc += b.integrand(step * static_cast<double>(k));
    *b.out = acc * step;
    const double tail_rate = b.integrand(horizon);
    if (tail_rate > 1e-8 * *b.out) report.truncated.emplace_back(b.name);
  }
  return report;
}

}  // namespace dampwave
