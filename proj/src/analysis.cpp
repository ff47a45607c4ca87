#include "dampwave/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "dampwave/error.hpp"

namespace dampwave {

EnergyTrace EnergyTrace::from_record(const RunRecord& record, std::string digest) {
  EnergyTrace trace;
  trace.t = record.t;
  trace.E = record.E;
  trace.Ew = record.Ew;
  trace.digest = std::move(digest);
  return trace;
}

void EnergyTrace::validate() const {
  if (t.size() != E.size()) throw std::invalid_argument("trace columns differ in length");
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!(E[k] >= 0.0)) throw std::invalid_argument("trace energy must be non-negative");
    if (k > 0 && !(t[k] > t[k - 1])) throw std::invalid_argument("trace times must be strictly increasing");
  }
}

DecayFit fit_decay(const EnergyTrace& trace, double t_a, double t_b) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = 0; k < trace.t.size(); ++k) {
    if (trace.t[k] < t_a || trace.t[k] > t_b || !(trace.E[k] > kEnergyFloor)) continue;
    xs.push_back(trace.t[k]);
    ys.push_back(std::log(trace.E[k]));
  }
  if (xs.size() < 10) throw DegenerateError("decay fit needs at least 10 samples above the energy floor");

  // shift by the first value so a constant trace gives an exact zero slope
  const double y0 = ys.front();
  for (double& y : ys) y -= y0;
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r = ys[k] - (intercept + slope * xs[k]);
    ss_res += r * r;
  }

  DecayFit fit;
  fit.rate = std::max(0.0, -slope);
  fit.amplitude = std::exp(intercept + y0);
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.samples = xs.size();
  return fit;
}

IssReport iss_report(std::vector<ScaledTrace> traces, double fit_start_fraction) {
  if (traces.empty()) throw ConfigError("ISS report needs at least one trace");
  std::stable_sort(traces.begin(), traces.end(),
                   [](const ScaledTrace& a, const ScaledTrace& b) { return a.scale < b.scale; });
  if (std::none_of(traces.begin(), traces.end(), [](const ScaledTrace& s) { return s.scale == 0.0; })) {
    throw ConfigError("ISS sweep must include the undisturbed scale 0");
  }

  IssReport report;
  report.fit_start_fraction = fit_start_fraction;
  for (auto& st : traces) {
    st.trace.validate();
    if (st.trace.t.empty()) throw ConfigError("empty trace in ISS sweep");
    IssRow row;
    row.scale = st.scale;
    row.budgets = st.budgets;
    row.e0 = st.trace.E.front();
    const double horizon = st.trace.horizon();
    const double tail_start = st.trace.t.front() + 0.8 * (horizon - st.trace.t.front());
    for (std::size_t k = 0; k < st.trace.t.size(); ++k) {
      row.e_max = std::max(row.e_max, st.trace.E[k]);
      if (st.trace.t[k] >= tail_start) row.e_inf = std::max(row.e_inf, st.trace.E[k]);
    }
    try {
      row.fit = fit_decay(st.trace, fit_start_fraction * horizon, horizon);
    } catch (const DegenerateError&) {
      row.fit.reset();
    }
    report.rows.push_back(std::move(row));
  }

  const IssRow* base = nullptr;
  for (const auto& row : report.rows) {
    if (row.scale == 0.0) base = &row;
  }
  report.decays_exponentially = base->fit && base->fit->rate > 0.0 && base->fit->r2 >= 0.9;

  report.remains_bounded = true;
  for (const auto& row : report.rows) {
    if (!std::isfinite(row.e_inf) || !(row.e_inf < 10.0 * std::max(row.e0, 1.0))) report.remains_bounded = false;
  }

  report.gain_monotone = true;
  for (std::size_t k = 1; k < report.rows.size(); ++k) {
    const double prev = report.rows[k - 1].e_inf;
    if (report.rows[k].e_inf < prev * (1.0 - 1e-12)) report.gain_monotone = false;
  }
  return report;
}

GnTheta gn_theta(double N, double m, double q, double r, double p) {
  if (!(N >= 1.0)) throw std::invalid_argument("dimension N must be >= 1");
  if (!(m >= 0.0)) throw std::invalid_argument("derivative order m must be >= 0");
  if (!(r >= 1.0 && r < p)) throw std::invalid_argument("need 1 <= r < p");
  if (!(q >= 1.0 && q <= p)) throw std::invalid_argument("need 1 <= q <= p");
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  const double denom = m / N + 1.0 / r - 1.0 / q;
  const double theta = (1.0 / r - inv_p) / denom;
  if (!(denom > 0.0) || !(theta > 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("Gagliardo-Nirenberg exponent outside (0, 1]");
  }
  return {theta, std::isinf(p) && m * q == N};
}

GnRatio gn_trajectory_ratio(const WaveSolver& solver, const std::vector<WaveState>& snapshots, double q) {
  if (!(q > 2.0)) throw std::invalid_argument("trajectory L^q ratio needs q > 2");
  const Grid& g = solver.grid();
  const double h2 = g.spacing() * g.spacing();
  GnRatio out;
  for (const auto& s : snapshots) {
    const double E = solver.energy(s);
    if (!(E > kEnergyFloor)) continue;
    double lq = 0.0;
    for (std::size_t idx : g.interior_nodes()) lq += std::pow(std::abs(s.v[idx]), q);
    const double ratio = h2 * lq / E;
    if (out.used == 0 || ratio > out.max_ratio) {
      out.max_ratio = ratio;
      out.time = s.t;
    }
    ++out.used;
  }
  if (out.used == 0) throw DegenerateError("every snapshot is below the energy floor");
  return out;
}

MultiplierDiagnostics multiplier_terms(const WaveSolver& solver, const std::vector<WaveState>& snapshots,
                                       const CutoffFields& cutoffs, const NodeMask& omega, double S,
                                       double T, double slack) {
  const Grid& g = solver.grid();
  const double h = g.spacing();
  const double h2 = h * h;
  const int nx = g.nx();
  const double tol = 1e-9 * std::max(1.0, T);

  std::vector<const WaveState*> window;
  for (const auto& s : snapshots) {
    if (s.t >= S - tol && s.t <= T + tol) window.push_back(&s);
  }
  if (window.size() < 10) throw ConfigError("multiplier diagnostics need >= 10 snapshots in [S, T]");

  const NodeMask q1 = cutoffs.q_mask(cutoffs.radii.eps1);
  const Field& a = solver.config().a;
  const DampingLaw& law = solver.config().law;

  struct Integrands {
    double vm = 0.0;
    double grad_q1 = 0.0;
    double damp_m = 0.0;
    double force_m = 0.0;
    double vel_omega = 0.0;
    double energy = 0.0;
  };
  std::vector<Integrands> values;
  values.reserve(window.size());
  for (const WaveState* s : window) {
    Integrands it;
    for (std::size_t idx : g.interior_nodes()) {
      const double gx = (s->u[idx + 1] - s->u[idx - 1]) / (2.0 * h);
      const double gy = (s->u[idx + nx] - s->u[idx - nx]) / (2.0 * h);
      const double mult = cutoffs.hx[idx] * gx + cutoffs.hy[idx] * gy + 0.5 * s->u[idx];
      const double v = s->v[idx];
      it.vm += v * mult;
      if (q1[idx]) it.grad_q1 += gx * gx + gy * gy;
      if (a[idx] != 0.0) it.damp_m += a[idx] * law.g(v + solver.d_at(idx, s->t)) * mult;
      it.force_m += solver.e_at(idx, s->t) * mult;
      if (omega[idx]) it.vel_omega += v * v;
    }
    it.vm *= h2;
    it.grad_q1 *= h2;
    it.damp_m *= h2;
    it.force_m *= h2;
    it.vel_omega *= h2;
    it.energy = solver.energy(*s);
    values.push_back(it);
  }

  auto integrate = [&](double Integrands::*field) {
    double acc = 0.0;
    for (std::size_t k = 1; k < window.size(); ++k) {
      acc += 0.5 * (window[k]->t - window[k - 1]->t) * (values[k].*field + values[k - 1].*field);
    }
    return acc;
  };

  MultiplierDiagnostics out;
  out.S = window.front()->t;
  out.T = window.back()->t;
  out.samples = window.size();
  out.slack = slack;
  out.t1 = std::abs(values.back().vm - values.front().vm);
  out.t2 = integrate(&Integrands::grad_q1);
  out.t3 = std::abs(integrate(&Integrands::damp_m));
  out.t4 = std::abs(integrate(&Integrands::force_m));
  out.t5 = integrate(&Integrands::vel_omega);
  out.energy_integral = integrate(&Integrands::energy);
  const double denom = out.t1 + slack * out.t2 + out.t3 + out.t4 + slack * out.t5;
  out.rho = denom > 0.0 ? out.energy_integral / denom : 0.0;
  return out;
}

std::string to_string(GronwallVerdict verdict) {
  switch (verdict) {
    case GronwallVerdict::holds:
      return "holds";
    case GronwallVerdict::hypothesis_violated:
      return "hypothesis-violated";
    case GronwallVerdict::conclusion_violated:
      return "conclusion-violated";
  }
  return "unknown";
}

namespace {

// Exact for E piecewise exponential between the samples.
double segment_integral(double t0, double t1, double e0, double e1) {
  const double dt = t1 - t0;
  if (e0 > 0.0 && e1 > 0.0 && std::abs(e0 / e1 - 1.0) > 1e-8) {
    return dt * (e0 - e1) / std::log(e0 / e1);
  }
  return 0.5 * dt * (e0 + e1);
}

}  // namespace

GronwallResult gronwall_check(const EnergyTrace& trace, double T_const, double C0, std::optional<double> tail_bound) {
  trace.validate();
  if (trace.t.size() < 2) throw std::invalid_argument("Gronwall check needs at least two samples");
  if (!(T_const > 0.0) || !(C0 >= 0.0)) throw std::invalid_argument("need T > 0 and C0 >= 0");
  const std::size_t n = trace.t.size();
  const double e0 = trace.E.front();
  if (!tail_bound && trace.E.back() > 1e-12 * e0) {
    throw std::invalid_argument("trace has not decayed below 1e-12 E(0); supply a tail bound");
  }

  std::vector<double> tail(n);
  tail[n - 1] = tail_bound.value_or(0.0);
  for (std::size_t k = n - 1; k-- > 0;) {
    tail[k] = tail[k + 1] + segment_integral(trace.t[k], trace.t[k + 1], trace.E[k], trace.E[k + 1]);
  }

  const double tol = 1e-12 * std::max(1.0, T_const * e0 + C0);
  GronwallResult res;
  res.hypothesis_margin = std::numeric_limits<double>::infinity();
  res.conclusion_margin = std::numeric_limits<double>::infinity();
  bool non_increasing = true;
  double pointwise = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double t = trace.t[k] - trace.t.front();
    const double hyp = T_const * trace.E[k] + C0 - tail[k];
    if (hyp < res.hypothesis_margin) {
      res.hypothesis_margin = hyp;
      res.worst_index = k;
    }
    res.conclusion_margin = std::min(res.conclusion_margin, T_const * e0 * std::exp(-t / T_const) + C0 - tail[k]);
    if (k > 0 && trace.E[k] > trace.E[k - 1]) non_increasing = false;
    pointwise = std::min(pointwise, e0 * std::exp(1.0 - t / T_const) + C0 / T_const - trace.E[k]);
  }
  if (non_increasing) res.pointwise_margin = pointwise;

  if (!(res.hypothesis_margin >= -tol)) {
    res.verdict = GronwallVerdict::hypothesis_violated;
  } else if (!(res.conclusion_margin >= -tol) || (res.pointwise_margin && *res.pointwise_margin < -tol)) {
    res.verdict = GronwallVerdict::conclusion_violated;
  } else {
    res.verdict = GronwallVerdict::holds;
  }
  return res;
}

namespace {

void validate_generalized(const GeneralizedGronwallInput& in) {
  const std::size_t n = in.t.size();
  if (n < 2 || in.F.size() != n || in.h1.size() != n || in.h2.size() != n) {
    throw std::invalid_argument("generalized Gronwall inputs need matching lengths >= 2");
  }
  if (!(in.alpha1 >= 0.0 && in.alpha1 < 1.0 && in.alpha2 >= 0.0 && in.alpha2 < 1.0)) {
    throw std::invalid_argument("exponents must lie in [0, 1)");
  }
  if (!(in.C1 >= 0.0 && in.C2 >= 0.0 && in.C3 >= 0.0)) throw std::invalid_argument("constants must be >= 0");
  for (std::size_t k = 0; k < n; ++k) {
    if (!(in.h1[k] >= 0.0 && in.h2[k] >= 0.0 && in.F[k] >= 0.0)) {
      throw std::invalid_argument("F, h1, h2 must be non-negative");
    }
    if (k > 0 && !(in.t[k] > in.t[k - 1])) throw std::invalid_argument("times must increase");
  }
}

// cum[k] = C1 int_{t0}^{tk} h1 F^a1 + C2 int h2 F^a2 (left-endpoint rule)
std::vector<double> cumulative_rhs(const GeneralizedGronwallInput& in, const std::vector<double>& F) {
  std::vector<double> cum(in.t.size(), 0.0);
  for (std::size_t k = 1; k < in.t.size(); ++k) {
    const std::size_t j = k - 1;
    const double dt = in.t[k] - in.t[j];
    cum[k] = cum[j] + dt * (in.C1 * in.h1[j] * std::pow(F[j], in.alpha1) + in.C2 * in.h2[j] * std::pow(F[j], in.alpha2));
  }
  return cum;
}

}  // namespace

std::vector<double> saturate_generalized_gronwall(const GeneralizedGronwallInput& input, double F0) {
  GeneralizedGronwallInput in = input;
  in.F.assign(in.t.size(), F0);
  validate_generalized(in);
  double cum = 0.0;
  for (std::size_t k = 1; k < in.t.size(); ++k) {
    const std::size_t j = k - 1;
    const double dt = in.t[k] - in.t[j];
    cum += dt * (in.C1 * in.h1[j] * std::pow(in.F[j], in.alpha1) + in.C2 * in.h2[j] * std::pow(in.F[j], in.alpha2));
    in.F[k] = F0 + in.C3 + cum;
  }
  return in.F;
}

GeneralizedGronwallResult generalized_gronwall_bound(const GeneralizedGronwallInput& in) {
  validate_generalized(in);
  const std::size_t n = in.t.size();
  const std::vector<double> cum = cumulative_rhs(in, in.F);

  GeneralizedGronwallResult res;
  double worst = -std::numeric_limits<double>::infinity();
  bool applicable = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double rhs = in.F[i] + in.C3 + (cum[j] - cum[i]);
      const double gap = in.F[j] - rhs;
      worst = std::max(worst, gap);
      if (gap > 1e-12 * std::max(1.0, rhs)) applicable = false;
    }
  }
  res.worst_hypothesis_gap = worst;
  res.applicable = applicable;

  double norm1 = 0.0;
  double norm2 = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    norm1 += in.h1[k] * (in.t[k + 1] - in.t[k]);
    norm2 += in.h2[k] * (in.t[k + 1] - in.t[k]);
  }
  res.c_tilde = in.C1 * norm1 + in.C2 * norm2;
  res.alpha = 2.0 * res.c_tilde >= 1.0 ? std::max(in.alpha1, in.alpha2) : std::min(in.alpha1, in.alpha2);
  const double growth = res.c_tilde > 0.0 ? std::pow(2.0 * res.c_tilde, 1.0 / (1.0 - res.alpha)) : 0.0;

  std::vector<double> suffix_max(n);
  suffix_max[n - 1] = in.F[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) suffix_max[k] = std::max(suffix_max[k + 1], in.F[k]);

  res.bound = std::max(2.0 * (in.F[0] + in.C3), growth);
  res.sup_F = suffix_max[0];
  res.bound_holds = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double bound = std::max(2.0 * (in.F[i] + in.C3), growth);
    if (suffix_max[i] > bound * (1.0 + 1e-12)) res.bound_holds = false;
  }
  return res;
}

GeneralizedGronwallSelfTest generalized_gronwall_self_test(int instances, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  GeneralizedGronwallSelfTest out;
  for (int inst = 0; inst < instances; ++inst) {
    GeneralizedGronwallInput in;
    const int n = 20 + static_cast<int>(unit(rng) * 180.0);
    double t = 0.0;
    for (int k = 0; k < n; ++k) {
      in.t.push_back(t);
      t += 0.01 + 0.2 * unit(rng);
    }
    // step functions: hold a random level for a random number of intervals
    auto step_function = [&]() {
      std::vector<double> h(static_cast<std::size_t>(n), 0.0);
      int k = 0;
      while (k < n) {
        const int run = 1 + static_cast<int>(unit(rng) * 10.0);
        const double level = unit(rng) < 0.3 ? 0.0 : 2.0 * unit(rng);
        for (int r = 0; r < run && k < n; ++r, ++k) h[static_cast<std::size_t>(k)] = level;
      }
      return h;
    };
    in.h1 = step_function();
    in.h2 = step_function();
    in.alpha1 = 0.95 * unit(rng);
    in.alpha2 = 0.95 * unit(rng);
    in.C1 = 0.01 + 2.0 * unit(rng);
    in.C2 = 0.01 + 2.0 * unit(rng);
    in.C3 = unit(rng);
    in.F = saturate_generalized_gronwall(in, 5.0 * unit(rng));
    const auto res = generalized_gronwall_bound(in);
    ++out.instances;
    if (res.applicable && res.bound_holds) ++out.holds;
  }
  return out;
}

}  // namespace dampwave
