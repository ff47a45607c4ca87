#pragma once

#include <limits>
#include <string>
#include <vector>

#include "dampwave/damping.hpp"
#include "dampwave/grid.hpp"

namespace dampwave {

/// Scalar time factor T(t) of a separable disturbance T(t) Phi(x).
struct TimeProfile {
  enum class Kind { zero, exp_decay, pulse };

  Kind kind = Kind::zero;
  double lambda = 1.0;                                     // exp_decay
  double t_off = std::numeric_limits<double>::infinity();  // exp_decay: hard switch-off
  double t0 = 0.0;                                         // pulse window
  double t1 = 1.0;

  static TimeProfile zero() { return {}; }
  static TimeProfile exp_decay(double lambda, double t_off = std::numeric_limits<double>::infinity());
  /// Raised cosine 1 - cos(2 pi (t - t0)/(t1 - t0)) on [t0, t1]: unit mean,
  /// C^1, zero outside the window.
  static TimeProfile pulse(double t0, double t1);

  double value(double t) const;
  double derivative(double t) const;
  /// Last time at which the profile can be nonzero (infinity for tails).
  double support_end() const;
  std::string describe() const;
};

/// Spatial factor Phi(x). Always multiplied by the interior mask when sampled.
struct SpaceProfile {
  enum class Kind { gaussian, eigenmode, constant };

  Kind kind = Kind::constant;
  Point center{0.5, 0.5};
  double width = 0.1;
  double amplitude = 1.0;
  int k = 1;
  int l = 1;
  double value = 0.0;

  static SpaceProfile gaussian(Point center, double width, double amplitude);
  static SpaceProfile eigenmode(int k, int l, double amplitude = 1.0);
  static SpaceProfile constant(double value);

  double at(Point p, const Grid& grid) const;
  Field sample(const Grid& grid) const;
  std::string describe() const;
};

struct ChannelRule {
  TimeProfile time;
  SpaceProfile space;

  bool is_zero() const { return time.kind == TimeProfile::Kind::zero; }
};

/// d enters the damping argument, e is the distributed forcing. `scale`
/// multiplies both channels (the sweep variable).
struct DisturbanceSpec {
  ChannelRule d;
  ChannelRule e;
  double scale = 1.0;

  DisturbanceSpec scaled(double s) const {
    DisturbanceSpec copy = *this;
    copy.scale = s;
    return copy;
  }
  bool d_active() const { return !d.is_zero() && scale != 0.0; }
  bool e_active() const { return !e.is_zero() && scale != 0.0; }
};

Field eval_d(const DisturbanceSpec& spec, double t, const Grid& grid);
Field eval_e(const DisturbanceSpec& spec, double t, const Grid& grid);
Field eval_d_t(const DisturbanceSpec& spec, double t, const Grid& grid);
Field eval_e_t(const DisturbanceSpec& spec, double t, const Grid& grid);

/// dbar(t, x) = int_0^t d(s, x) ds by the trapezoid rule with step <= dt_quadrature.
Field accumulate_dbar(const DisturbanceSpec& spec, double t, double dt_quadrature, const Grid& grid);

struct BudgetReport {
  double c1_d = 0.0;
  double c2_d = 0.0;
  double c3_d = 0.0;
  double c4_d = 0.0;
  double c5_d = 0.0;
  double c6_d = 0.0;
  double cbar1_e = 0.0;
  double cbar2_e = 0.0;
  double cbar3_e = 0.0;
  double horizon = 0.0;
  double p = 0.0;
  /// Budgets whose integrand at the horizon is not yet below 1e-8 of the
  /// accumulated value.
  std::vector<std::string> truncated;
};

/// Space-time integral norms of d and e, truncated at `horizon`.
BudgetReport compute_budgets(const DisturbanceSpec& spec, const DampingLaw& law, double horizon,
                             const Grid& grid, double dt_quadrature);

}  // namespace dampwave
