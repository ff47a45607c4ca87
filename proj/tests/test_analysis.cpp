#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dampwave/analysis.hpp"
#include "dampwave/error.hpp"
#include "doctest.h"

using namespace dampwave;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

template <class Fn>
EnergyTrace sampled(Fn&& f, double t_end, int n) {
  EnergyTrace tr;
  for (int k = 0; k <= n; ++k) {
    const double t = t_end * k / n;
    tr.t.push_back(t);
    tr.E.push_back(f(t));
  }
  return tr;
}

struct Localized {
  Grid grid;
  GammaRegion gamma;
  NodeMask omega;
  CutoffFields cutoffs;
  SimConfig sim;
};

Localized localized_run(double h, double horizon, double snapshot_spacing) {
  Localized s;
  s.grid = build_grid(DomainSpec::rectangle(1.0, 1.0), h);
  s.gamma = gamma_region(s.grid, {-1.0, -1.0});
  s.omega = epsilon_neighborhood(s.grid, s.gamma, 0.25);
  s.cutoffs = build_cutoffs(s.grid, s.gamma, CutoffRadii::defaults(0.25));
  s.sim.grid = s.grid;
  s.sim.a = build_localization(s.omega, 1.0, LocalizationProfile::smooth, s.grid, 0.0625).a;
  s.sim.law = DampingLaw::linear(1.0);
  s.sim.dt = s.sim.max_dt();
  s.sim.horizon = horizon;
  s.sim.record_stride = std::max(1, static_cast<int>(std::lround(snapshot_spacing / s.sim.dt)));
  s.sim.store_snapshots = true;
  s.sim.initial_u = InitialRule::eigenmode(1, 1, 1.0);
  return s;
}

}  // namespace

TEST_CASE("fit_decay examples") {
  const EnergyTrace ex = sampled([](double t) { return 5.0 * std::exp(-0.7 * t); }, 10.0, 100);
  const DecayFit f = fit_decay(ex, 0.0, 10.0);
  CHECK(f.rate == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(f.amplitude == doctest::Approx(5.0).epsilon(1e-6));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.samples == 101);

  const DecayFit c = fit_decay(sampled([](double) { return 2.0; }, 10.0, 50), 0.0, 10.0);
  CHECK(c.rate == 0.0);

  // growth is clamped to zero
  CHECK(fit_decay(sampled([](double t) { return std::exp(t); }, 5.0, 50), 0.0, 5.0).rate == 0.0);

  CHECK_THROWS_AS(fit_decay(ex, 0.0, 0.5), DegenerateError);
  const EnergyTrace tiny = sampled([](double) { return 1e-20; }, 10.0, 50);
  CHECK_THROWS_AS(fit_decay(tiny, 0.0, 10.0), DegenerateError);
}

TEST_CASE("iss report examples and ordering invariance") {
  auto trace = [](double level) {
    return sampled([level](double t) { return std::exp(-t) + level * (1.0 - std::exp(-t)); }, 20.0, 400);
  };
  std::vector<ScaledTrace> in{{0.0, trace(0.0), {}}, {1.0, trace(0.5), {}}, {2.0, trace(1.2), {}}};
  const IssReport r = iss_report(in);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.baseline().scale == 0.0);
  CHECK(r.baseline().e_inf <= 1e-6 * r.baseline().e0);
  CHECK(r.decays_exponentially);
  CHECK(r.remains_bounded);
  CHECK(r.gain_monotone);
  CHECK(r.rows[1].e_inf > r.rows[0].e_inf);

  std::reverse(in.begin(), in.end());
  const IssReport rr = iss_report(in);
  CHECK(rr.gain_monotone == r.gain_monotone);
  CHECK(rr.decays_exponentially == r.decays_exponentially);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(rr.rows[k].scale == r.rows[k].scale);
    CHECK(rr.rows[k].e_inf == r.rows[k].e_inf);
  }

  // a gain that drops with the scale
  std::vector<ScaledTrace> bad{{0.0, trace(0.0), {}}, {1.0, trace(0.5), {}}, {2.0, trace(0.2), {}}};
  CHECK_FALSE(iss_report(bad).gain_monotone);

  std::vector<ScaledTrace> missing{{1.0, trace(0.5), {}}, {2.0, trace(1.2), {}}};
  CHECK_THROWS_AS(iss_report(missing), ConfigError);
}

TEST_CASE("gn_theta") {
  const GnTheta a = gn_theta(2, 1, 2, 2, 4);
  CHECK(a.theta == 0.5);
  CHECK_FALSE(a.boundary);
  const GnTheta b = gn_theta(2, 1, 2, 2, inf);
  CHECK(b.theta == doctest::Approx(1.0));
  CHECK(b.boundary);
  CHECK_THROWS_AS(gn_theta(2, 1, 2, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(gn_theta(2, 1, 5, 2, 4), std::invalid_argument);
  CHECK_THROWS_AS(gn_theta(2, -1, 2, 2, 4), std::invalid_argument);
  // theta above 1
  CHECK_THROWS_AS(gn_theta(2, 0.2, 2, 2, 4), std::invalid_argument);
  for (double p : {3.0, 6.0, 10.0, inf}) {
    for (double m : {0.5, 1.0, 2.0}) {
      try {
        const double th = gn_theta(2, m, 2, 2, p).theta;
        CHECK(th > 0.0);
        CHECK(th <= 1.0);
      } catch (const std::invalid_argument&) {
      }
    }
  }
}

TEST_CASE("gn trajectory ratio scaling") {
  SimConfig c;
  c.grid = build_grid(DomainSpec::rectangle(1.0, 1.0), 1.0 / 32.0);
  c.a = c.grid.zeros();
  c.dt = c.max_dt();
  const WaveSolver solver(c);
  const Field phi = InitialRule::eigenmode(1, 1, 1.0).sample(c.grid);
  auto state = [&](double amp) {
    WaveState s;
    s.u = c.grid.zeros();
    s.v = phi;
    for (double& x : s.v) x *= amp;
    return s;
  };
  const double q = 4.0;
  const double r1 = gn_trajectory_ratio(solver, {state(1.0)}, q).max_ratio;
  const double r2 = gn_trajectory_ratio(solver, {state(2.0)}, q).max_ratio;
  CHECK(r2 / r1 == doctest::Approx(std::pow(2.0, q - 2)).epsilon(1e-12));

  WaveState still;
  still.u = phi;
  still.v = c.grid.zeros();
  CHECK(gn_trajectory_ratio(solver, {still}, q).max_ratio == 0.0);

  WaveState rest;
  rest.u = c.grid.zeros();
  rest.v = c.grid.zeros();
  CHECK_THROWS_AS(gn_trajectory_ratio(solver, {rest}, q), DegenerateError);
  CHECK_THROWS_AS(gn_trajectory_ratio(solver, {state(1.0)}, 2.0), std::invalid_argument);
}

TEST_CASE("gn ratio along a damped run is attained at a recorded time") {
  Localized s = localized_run(1.0 / 32.0, 4.0, 0.05);
  const WaveSolver solver(s.sim);
  const RunRecord rec = solver.run();
  const GnRatio g = gn_trajectory_ratio(solver, rec.snapshots, 4.0);
  CHECK(std::isfinite(g.max_ratio));
  CHECK(g.max_ratio > 0.0);
  CHECK(std::find(rec.t.begin(), rec.t.end(), g.time) != rec.t.end());
}

TEST_CASE("multiplier terms") {
  Localized s = localized_run(1.0 / 32.0, 12.0, 0.05);
  const WaveSolver solver(s.sim);
  const RunRecord rec = solver.run();

  std::vector<double> rho;
  for (double T : {3.0, 6.0, 12.0}) {
    const MultiplierDiagnostics m = multiplier_terms(solver, rec.snapshots, s.cutoffs, s.omega, 0.0, T);
    CHECK(m.t2 >= 0.0);
    CHECK(m.t5 >= 0.0);
    CHECK(m.t4 == 0.0);
    CHECK(m.slack == 1.0);
    CHECK(m.energy_integral > 0.0);
    CHECK(std::isfinite(m.rho));
    rho.push_back(m.rho);
  }
  CHECK(*std::max_element(rho.begin(), rho.end()) <= 2.0 * rho.front());

  // rest state
  SimConfig rest = s.sim;
  rest.initial_u = InitialRule::zero();
  rest.horizon = 1.0;
  const WaveSolver rs(rest);
  const RunRecord rr = rs.run();
  const MultiplierDiagnostics z = multiplier_terms(rs, rr.snapshots, s.cutoffs, s.omega, 0.0, 1.0);
  for (double x : {z.t1, z.t2, z.t3, z.t4, z.t5, z.energy_integral, z.rho}) CHECK(x == 0.0);

  CHECK_THROWS_AS(multiplier_terms(rs, {rr.snapshots.begin(), rr.snapshots.begin() + 5}, s.cutoffs, s.omega, 0.0, 1.0),
                  ConfigError);
}

TEST_CASE("gronwall examples") {
  const double T = 2.0;
  const double E0 = 3.0;
  const EnergyTrace ex = sampled([&](double t) { return E0 * std::exp(-t / T); }, 80.0, 4000);
  const GronwallResult a = gronwall_check(ex, T, 0.0);
  CHECK(a.verdict == GronwallVerdict::holds);
  CHECK(std::abs(a.conclusion_margin) <= 1e-9);
  CHECK(std::abs(a.hypothesis_margin) <= 1e-9);

  const EnergyTrace flat = sampled([](double) { return 1.0; }, 10.0, 100);
  CHECK_THROWS_AS(gronwall_check(flat, 10.0, 1.0), std::invalid_argument);
  CHECK(gronwall_check(flat, 10.0, 1.0, 1e6).verdict == GronwallVerdict::hypothesis_violated);

  const double horizon = 40.0;
  const EnergyTrace sum = sampled([](double t) { return std::exp(-t) + 0.01; }, horizon, 4000);
  const GronwallResult c = gronwall_check(sum, 1.0, 0.01 * horizon, std::exp(-horizon));
  CHECK(c.verdict == GronwallVerdict::holds);
  CHECK(c.conclusion_margin >= 0.0);
  CHECK(to_string(GronwallVerdict::hypothesis_violated) == "hypothesis-violated");
}

TEST_CASE("fitted constants on a solver trace") {
  Localized s = localized_run(1.0 / 32.0, 15.0, 0.05);
  const RunRecord rec = run(s.sim);
  const EnergyTrace tr = EnergyTrace::from_record(rec);
  const std::size_t n = tr.t.size();

  // suffix integrals by the trapezoid rule
  std::vector<double> suffix(n, 0.0);
  for (std::size_t k = n - 1; k-- > 0;) suffix[k] = suffix[k + 1] + 0.5 * (tr.t[k + 1] - tr.t[k]) * (tr.E[k] + tr.E[k + 1]);

  // least squares for int_S^T E ~ A E(S) over all pairs, then B from the worst pair
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double I = suffix[i] - suffix[j];
      sxy += tr.E[i] * I;
      sxx += tr.E[i] * tr.E[i];
    }
  }
  const double A = sxy / sxx;
  double B = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) B = std::max(B, suffix[i] - suffix[j] - A * tr.E[i]);
  }
  CHECK(A > 0.0);
  double worst = inf;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) worst = std::min(worst, A * tr.E[i] + B - (suffix[i] - suffix[j]));
  }
  CHECK(worst >= -1e-9);
}

TEST_CASE("generalized gronwall examples") {
  GeneralizedGronwallInput in;
  for (int k = 0; k <= 50; ++k) in.t.push_back(0.1 * k);
  in.h1.assign(in.t.size(), 0.0);
  in.h2.assign(in.t.size(), 0.0);
  in.F.assign(in.t.size(), 1.5);
  const GeneralizedGronwallResult z = generalized_gronwall_bound(in);
  CHECK(z.applicable);
  CHECK(z.c_tilde == 0.0);
  CHECK(z.bound == 3.0);
  CHECK(z.sup_F == 1.5);
  CHECK(z.bound_holds);

  // alpha = 0: saturate the hypothesis and compare with max(2(F0 + C3), 2 C~)
  in.h1.clear();
  in.h2.clear();
  for (std::size_t k = 0; k < in.t.size(); ++k) {
    in.h1.push_back(k % 7 < 3 ? 0.0 : 0.4);
    in.h2.push_back(k % 5 == 0 ? 1.1 : 0.0);
  }
  in.C1 = 0.3;
  in.C2 = 0.2;
  in.C3 = 0.25;
  const double F0 = 0.8;
  in.F = saturate_generalized_gronwall(in, F0);
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 0; k + 1 < in.t.size(); ++k) {
    m1 += in.h1[k] * (in.t[k + 1] - in.t[k]);
    m2 += in.h2[k] * (in.t[k + 1] - in.t[k]);
  }
  const double ct = in.C1 * m1 + in.C2 * m2;
  const GeneralizedGronwallResult g = generalized_gronwall_bound(in);
  CHECK(g.applicable);
  CHECK(g.c_tilde == doctest::Approx(ct).epsilon(1e-12));
  CHECK(g.bound == doctest::Approx(std::max(2 * (F0 + in.C3), 2 * ct)).epsilon(1e-12));
  CHECK(g.sup_F == doctest::Approx(in.F.back()));
  CHECK(g.bound_holds);

  // F that breaks the hypothesis
  in.F.back() += 10.0;
  CHECK_FALSE(generalized_gronwall_bound(in).applicable);

  const GeneralizedGronwallSelfTest st = generalized_gronwall_self_test(100, 20240601);
  CHECK(st.instances == 100);
  CHECK(st.holds == 100);
}
