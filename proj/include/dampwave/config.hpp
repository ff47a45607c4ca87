#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dampwave/damping.hpp"
#include "dampwave/disturbance.hpp"
#include "dampwave/geometry.hpp"
#include "dampwave/grid.hpp"
#include "dampwave/kernels.hpp"
#include "dampwave/wave_solver.hpp"

namespace dampwave {

enum class OmegaKind { mgc, band, full, none };

struct GeometryConfig {
  DomainSpec domain = DomainSpec::rectangle(1.0, 1.0);
  Point x0{-1.0, -1.0};
  double epsilon = 0.25;
  std::optional<double> eps0;
  std::optional<double> eps1;
  std::optional<double> eps2;
  OmegaKind omega = OmegaKind::mgc;
  double omega_width = 0.25;  ///< band only: omega = N_width(gamma)
  double a0 = 1.0;
  LocalizationProfile profile = LocalizationProfile::constant;
  bool require_mgc = false;

  CutoffRadii radii() const;
};

struct DampingConfig {
  DampingFamily family = DampingFamily::linear;
  double kappa = 1.0;
  std::vector<double> coeffs;
  std::optional<double> q;
  std::optional<double> m;
  std::optional<double> c_growth;
  bool require_h1 = false;
  double h1_range = 10.0;
  std::size_t h1_samples = 2001;

  DampingLaw law() const;
};

struct DisturbanceConfig {
  DisturbanceSpec spec;
  std::vector<double> scales{0.0, 1.0};
  double quadrature_dt = 0.01;
  std::optional<double> budget_horizon;
};

struct SolverConfig {
  double h = 1.0 / 32.0;
  std::optional<double> dt;  ///< empty means auto (largest CFL-admissible step)
  double horizon = 10.0;
  int stride = 10;
  bool snapshots = false;
  InitialRule initial_u = InitialRule::eigenmode(1, 1, 1.0);
  InitialRule initial_v;
  kernels::Backend backend = kernels::Backend::parallel;
};

struct AnalysisConfig {
  std::optional<double> fit_start;  ///< default horizon / 2
  std::optional<double> fit_end;    ///< default horizon
  double gn_q = 4.0;
  bool multiplier = false;
  double window_S = 0.0;
  std::optional<double> window_T;
};

struct OutputConfig {
  std::string dir = "out";
  bool rasters = false;
};

struct ExperimentConfig {
  GeometryConfig geometry;
  DampingConfig damping;
  DisturbanceConfig disturbance;
  SolverConfig solver;
  AnalysisConfig analysis;
  OutputConfig output;
  std::uint64_t seed = 0;

  /// Every key explicitly present in the source text, normalized.
  std::map<std::string, std::string> entries;
  std::string digest;

  double dt() const;
  double fit_start() const { return analysis.fit_start.value_or(0.5 * solver.horizon); }
  double fit_end() const { return analysis.fit_end.value_or(solver.horizon); }
};

/// Parses `section.key = value` lines; `#` starts a comment. Numbers accept
/// fractions such as 1/64. Throws ParseError (with the line number) on
/// unknown keys, duplicates, malformed values and CFL violations.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// FNV-1a over the sorted key = value lines, 16 hex digits.
std::string config_digest(const std::map<std::string, std::string>& entries);

/// Documented keys with their default values, in section order.
const std::vector<std::pair<std::string, std::string>>& config_keys();

/// Rule grammar: zero | exp(lambda[,t_off]) | pulse(t0,t1).
TimeProfile parse_time_rule(const std::string& text);
/// gaussian(cx,cy,width[,amp]) | eigenmode(k,l[,amp]) | constant(c).
SpaceProfile parse_space_rule(const std::string& text);
/// zero | eigenmode(k,l[,amp]) | gaussian(cx,cy,width[,amp]).
InitialRule parse_initial_rule(const std::string& text);
/// Decimal, scientific or a/b.
double parse_number(const std::string& text);

}  // namespace dampwave
