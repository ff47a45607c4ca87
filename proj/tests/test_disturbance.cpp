#include <cmath>
#include <numbers>

#include "dampwave/disturbance.hpp"
#include "dampwave/error.hpp"
#include "doctest.h"

using namespace dampwave;

namespace {

const Grid& unit_grid() {
  static const Grid g = build_grid(DomainSpec::rectangle(1.0, 1.0), 1.0 / 32.0);
  return g;
}

double l2_sq(const Grid& g, const Field& f) {
  double acc = 0.0;
  for (std::size_t idx : g.interior_nodes()) acc += f[idx] * f[idx];
  return acc * g.spacing() * g.spacing();
}

double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

DisturbanceSpec exp_d(const SpaceProfile& phi) {
  DisturbanceSpec s;
  s.d = {TimeProfile::exp_decay(1.0), phi};
  return s;
}

}  // namespace

TEST_CASE("field evaluation examples") {
  const Grid& g = unit_grid();
  DisturbanceSpec zero;
  for (double x : eval_d(zero, 0.3, g)) CHECK(x == 0.0);
  for (double x : eval_e(zero, 0.3, g)) CHECK(x == 0.0);

  const DisturbanceSpec s = exp_d(SpaceProfile::eigenmode(1, 1));
  const Field d0 = eval_d(s, 0.0, g);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const Point p = g.node(idx);
    const double expected = g.is_interior(idx) ? std::sin(std::numbers::pi * p.x) * std::sin(std::numbers::pi * p.y) : 0.0;
    CHECK(d0[idx] == doctest::Approx(expected).epsilon(1e-14));
  }

  DisturbanceSpec pulse;
  pulse.d = {TimeProfile::pulse(1.0, 2.0), SpaceProfile::constant(1.0)};
  for (double x : eval_d(pulse, 3.0, g)) CHECK(x == 0.0);

  // boundary nodes are zero even for a constant profile
  const Field c = eval_d(pulse, 1.5, g);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!g.is_interior(idx)) CHECK(c[idx] == 0.0);
  }
}

TEST_CASE("time profiles") {
  const TimeProfile p = TimeProfile::pulse(1.0, 3.0);
  CHECK(p.value(0.5) == 0.0);
  CHECK(p.value(2.0) == doctest::Approx(2.0));
  CHECK(p.support_end() == 3.0);
  const double h = 1e-6;
  for (double t : {1.3, 2.0, 2.7}) {
    CHECK(p.derivative(t) == doctest::Approx((p.value(t + h) - p.value(t - h)) / (2 * h)).epsilon(1e-6));
  }
  const TimeProfile e = TimeProfile::exp_decay(2.0, 4.0);
  CHECK(e.value(1.0) == doctest::Approx(std::exp(-2.0)));
  CHECK(e.value(4.5) == 0.0);
  CHECK(e.derivative(1.0) == doctest::Approx(-2.0 * std::exp(-2.0)));
  CHECK_THROWS_AS(TimeProfile::pulse(2.0, 1.0), ConfigError);
  CHECK_THROWS_AS(TimeProfile::exp_decay(-1.0), ConfigError);
}

TEST_CASE("dbar accumulation") {
  const Grid& g = unit_grid();
  DisturbanceSpec zero;
  for (double x : accumulate_dbar(zero, 2.0, 0.1, g)) CHECK(x == 0.0);

  const DisturbanceSpec s = exp_d(SpaceProfile::gaussian({0.5, 0.5}, 0.2, 1.0));
  const Field phi = s.d.space.sample(g);
  const double t = 2.0;
  Field exact(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) exact[k] = (1.0 - std::exp(-t)) * phi[k];
  const double e1 = max_abs_diff(accumulate_dbar(s, t, 0.1, g), exact);
  const double e2 = max_abs_diff(accumulate_dbar(s, t, 0.05, g), exact);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.02));

  DisturbanceSpec pulse;
  pulse.d = {TimeProfile::pulse(0.0, 1.0), SpaceProfile::eigenmode(1, 2)};
  const Field phi2 = pulse.d.space.sample(g);
  CHECK(max_abs_diff(accumulate_dbar(pulse, 2.0, 0.01, g), phi2) <= 1e-12);

  // time derivative of dbar recovers d
  const double dtq = 0.01;
  const double tc = 0.7;
  const double step = 1e-3;
  const Field plus = accumulate_dbar(s, tc + step, dtq, g);
  const Field minus = accumulate_dbar(s, tc - step, dtq, g);
  const Field d = eval_d(s, tc, g);
  Field fd(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) fd[k] = (plus[k] - minus[k]) / (2 * step);
  CHECK(max_abs_diff(fd, d) <= 1e-4);
}

TEST_CASE("budget closed forms") {
  const Grid& g = unit_grid();
  const auto law = DampingLaw::linear(1.0);
  const BudgetReport zero = compute_budgets(DisturbanceSpec{}, law, 10.0, g, 0.01);
  for (double v : {zero.c1_d, zero.c2_d, zero.c3_d, zero.c4_d, zero.c5_d, zero.c6_d, zero.cbar1_e, zero.cbar2_e, zero.cbar3_e}) {
    CHECK(v == 0.0);
  }

  const SpaceProfile phi = SpaceProfile::eigenmode(1, 1);
  const double n2 = l2_sq(g, phi.sample(g));
  DisturbanceSpec s = exp_d(phi);
  s.e = {TimeProfile::exp_decay(1.0), phi};
  const BudgetReport b = compute_budgets(s, law, 30.0, g, 0.01);
  CHECK(b.c3_d == doctest::Approx(n2 / 2).epsilon(1e-3));
  CHECK(b.cbar2_e == doctest::Approx(std::sqrt(n2)).epsilon(1e-3));
  CHECK(b.cbar1_e == doctest::Approx(n2 / 2).epsilon(1e-3));
  CHECK(b.c5_d == doctest::Approx(std::sqrt(n2)).epsilon(1e-3));
  CHECK(b.p == 3.0);
  CHECK(b.truncated.empty());

  const BudgetReport short_h = compute_budgets(s, law, 2.0, g, 0.01);
  CHECK_FALSE(short_h.truncated.empty());
}

TEST_CASE("budget scaling laws") {
  const Grid& g = unit_grid();
  const auto law = DampingLaw::cubic();  // q = 3, m = 2
  DisturbanceSpec base;
  base.d = {TimeProfile::pulse(0.0, 2.0), SpaceProfile::gaussian({0.4, 0.6}, 0.15, 0.8)};
  base.e = {TimeProfile::exp_decay(0.5), SpaceProfile::eigenmode(2, 1)};
  const BudgetReport b1 = compute_budgets(base.scaled(1.0), law, 40.0, g, 0.01);
  const BudgetReport b2 = compute_budgets(base.scaled(2.0), law, 40.0, g, 0.01);
  const BudgetReport b3 = compute_budgets(base.scaled(3.0), law, 40.0, g, 0.01);
  const double q = law.q();
  const double m = law.m();
  const double rel = 1e-12;

  CHECK(b3.c3_d == doctest::Approx(9 * b1.c3_d).epsilon(rel));
  CHECK(b3.c4_d == doctest::Approx(9 * b1.c4_d).epsilon(1e-10));
  CHECK(b3.c2_d == doctest::Approx(std::pow(3.0, m + 2) * b1.c2_d).epsilon(1e-10));
  CHECK(b3.c5_d == doctest::Approx(3 * b1.c5_d).epsilon(rel));
  CHECK(b3.c6_d == doctest::Approx(3 * b1.c6_d).epsilon(rel));
  CHECK(b3.cbar1_e == doctest::Approx(9 * b1.cbar1_e).epsilon(rel));
  CHECK(b3.cbar2_e == doctest::Approx(3 * b1.cbar2_e).epsilon(rel));
  CHECK(b3.cbar3_e == doctest::Approx(3 * b1.cbar3_e).epsilon(rel));

  // C1(s) = s^2 A + s^{2q} B: solve A, B from s = 1, 2 and predict s = 3
  const double B = (b2.c1_d - 4 * b1.c1_d) / (std::pow(2.0, 2 * q) - 4);
  const double A = b1.c1_d - B;
  CHECK(A > 0);
  CHECK(B > 0);
  CHECK(b3.c1_d == doctest::Approx(9 * A + std::pow(3.0, 2 * q) * B).epsilon(1e-10));
}

TEST_CASE("budgets grow with the horizon") {
  const Grid& g = unit_grid();
  DisturbanceSpec s;
  s.d = {TimeProfile::exp_decay(0.3), SpaceProfile::gaussian({0.5, 0.5}, 0.2, 1.0)};
  s.e = {TimeProfile::pulse(1.0, 4.0), SpaceProfile::constant(0.5)};
  BudgetReport prev = compute_budgets(s, DampingLaw::saturating(), 1.0, g, 0.01);
  for (double horizon : {2.0, 5.0, 10.0, 20.0}) {
    const BudgetReport cur = compute_budgets(s, DampingLaw::saturating(), horizon, g, 0.01);
    CHECK(cur.c1_d >= prev.c1_d);
    CHECK(cur.c3_d >= prev.c3_d);
    CHECK(cur.c4_d >= prev.c4_d);
    CHECK(cur.c5_d >= prev.c5_d);
    CHECK(cur.cbar1_e >= prev.cbar1_e);
    CHECK(cur.cbar3_e >= prev.cbar3_e);
    prev = cur;
  }
}
