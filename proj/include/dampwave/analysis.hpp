#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dampwave/disturbance.hpp"
#include "dampwave/geometry.hpp"
#include "dampwave/wave_solver.hpp"

namespace dampwave {

struct EnergyTrace {
  std::vector<double> t;
  std::vector<double> E;
  std::vector<double> Ew;  ///< optional, may be empty
  std::string digest;

  static EnergyTrace from_record(const RunRecord& record, std::string digest = {});
  double horizon() const { return t.empty() ? 0.0 : t.back(); }
  /// Throws std::invalid_argument on negative values or non-increasing times.
  void validate() const;
};

struct DecayFit {
  double rate = 0.0;       ///< sigma_hat >= 0
  double amplitude = 0.0;  ///< A_hat in E ~ A exp(-sigma t)
  double r2 = 0.0;
  std::size_t samples = 0;
};

/// Least squares on (t, log E) over samples in [t_a, t_b] with E > 1e-14.
/// Needs at least 10 such samples (DegenerateError otherwise).
DecayFit fit_decay(const EnergyTrace& trace, double t_a, double t_b);

inline constexpr double kEnergyFloor = 1e-14;

struct IssRow {
  double scale = 0.0;
  std::optional<DecayFit> fit;
  double e_inf = 0.0;  ///< max E over the final 20% of the horizon
  double e0 = 0.0;
  double e_max = 0.0;
  BudgetReport budgets;
};

struct IssReport {
  std::vector<IssRow> rows;  ///< sorted by scale
  double fit_start_fraction = 0.5;
  bool decays_exponentially = false;
  bool remains_bounded = false;
  bool gain_monotone = false;

  const IssRow& baseline() const { return rows.front(); }
};

struct ScaledTrace {
  double scale = 0.0;
  EnergyTrace trace;
  BudgetReport budgets;
};

/// Aggregates a disturbance-scale sweep. Requires a scale-0 baseline
/// (ConfigError otherwise). Fits use the window [fit_start_fraction * T, T].
IssReport iss_report(std::vector<ScaledTrace> traces, double fit_start_fraction = 0.5);

struct GnTheta {
  double theta = 0.0;
  bool boundary = false;  ///< p = inf with m q = N, where the estimate needs theta < 1
};

/// Gagliardo-Nirenberg exponent (1/r - 1/p) / (m/N + 1/r - 1/q). Pass
/// p = infinity for the L^inf case. Throws std::invalid_argument outside
/// 1 <= r < p <= inf, 1 <= q <= p, m >= 0, or when theta is not in (0, 1].
GnTheta gn_theta(double N, double m, double q, double r, double p);

struct GnRatio {
  double max_ratio = 0.0;
  double time = 0.0;
  std::size_t used = 0;
};

/// max over snapshots of ||u_t||_{L^q}^q / E, skipping samples with
/// E <= kEnergyFloor (DegenerateError when all are skipped).
GnRatio gn_trajectory_ratio(const WaveSolver& solver, const std::vector<WaveState>& snapshots, double q);

struct MultiplierDiagnostics {
  double S = 0.0;
  double T = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  double t4 = 0.0;
  double t5 = 0.0;
  double energy_integral = 0.0;
  double slack = 1.0;
  double rho = 0.0;
  std::size_t samples = 0;
};

/// Terms of the multiplier inequality int_S^T E <= T1 + C T2 + T3 + T4 + C T5
/// with M(u) = h.grad u + u/2 (centred differences), h = psi (x - x0).
/// Q1 = {dist <= eps1}. Needs >= 10 snapshots in [S, T] (ConfigError).
MultiplierDiagnostics multiplier_terms(const WaveSolver& solver, const std::vector<WaveState>& snapshots,
                                       const CutoffFields& cutoffs, const NodeMask& omega, double S,
                                       double T, double slack = 1.0);

enum class GronwallVerdict { holds, hypothesis_violated, conclusion_violated };

std::string to_string(GronwallVerdict verdict);

struct GronwallResult {
  GronwallVerdict verdict = GronwallVerdict::holds;
  double hypothesis_margin = 0.0;  ///< min over samples of T E(t) + C0 - tail(t)
  double conclusion_margin = 0.0;  ///< min of T E(0) e^{-t/T} + C0 - tail(t)
  std::optional<double> pointwise_margin;  ///< E(0) e^{1-t/T} + C0/T - E(t), non-increasing traces only
  std::size_t worst_index = 0;
};

/// Integral Gronwall lemma on a sampled trace. The tail int_t^inf E is
/// integrated piecewise-exponentially between samples plus `tail_bound`
/// beyond the last sample. Without a tail bound the trace must fall below
/// 1e-12 E(0) (std::invalid_argument otherwise).
GronwallResult gronwall_check(const EnergyTrace& trace, double T_const, double C0,
                              std::optional<double> tail_bound = std::nullopt);

struct GeneralizedGronwallInput {
  std::vector<double> t;   ///< sample times (increasing)
  std::vector<double> F;   ///< F >= 0
  std::vector<double> h1;  ///< step values on [t_k, t_k+1)
  std::vector<double> h2;
  double C1 = 1.0;
  double C2 = 1.0;
  double C3 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
};

struct GeneralizedGronwallResult {
  bool applicable = false;    ///< hypothesis holds at every sample pair S <= T
  double c_tilde = 0.0;
  double alpha = 0.0;
  double bound = 0.0;         ///< bound for S = first sample
  double sup_F = 0.0;         ///< brute-force sup over the samples
  bool bound_holds = false;   ///< for every start S on the lattice
  double worst_hypothesis_gap = 0.0;
};

/// Bound max(2(F(S)+C3), (2 C~)^{1/(1-alpha)}) with C~ = C1|h1|_1 + C2|h2|_1,
/// alpha = max(alpha1, alpha2) if 2C~ >= 1 else min. Integrals use the
/// left-endpoint rule of the step functions.
GeneralizedGronwallResult generalized_gronwall_bound(const GeneralizedGronwallInput& input);

/// F built as the right-hand side of the hypothesis from S = t_0.
std::vector<double> saturate_generalized_gronwall(const GeneralizedGronwallInput& input, double F0);

struct GeneralizedGronwallSelfTest {
  int instances = 0;
  int holds = 0;
};

/// Random hypothesis-saturating instances (step functions h1, h2, random
/// alphas and constants); counts how many satisfy the bound.
GeneralizedGronwallSelfTest generalized_gronwall_self_test(int instances, std::uint64_t seed);

}  // namespace dampwave
