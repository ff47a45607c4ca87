#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dampwave/analysis.hpp"
#include "dampwave/config.hpp"
#include "dampwave/geometry.hpp"
#include "dampwave/wave_solver.hpp"

namespace dampwave {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFault = 1;
inline constexpr int kExitHypothesis = 2;

const char* tool_version();

/// Geometry, damping and solver inputs derived from a config.
struct ExperimentSetup {
  Grid grid;
  GammaRegion gamma;
  NodeMask omega;
  LocalizationField localization;
  CutoffFields cutoffs;
  MgcCheck mgc;
  DampingLaw law = DampingLaw::linear(1.0);
  H1Report h1;
  SimConfig sim;
};

/// omega per geometry.omega; smooth profiles ramp over eps - eps2.
ExperimentSetup build_setup(const ExperimentConfig& config);

struct RunResult {
  RunRecord record;
  BudgetReport budgets;
  std::optional<DecayFit> fit;
  std::optional<GnRatio> gn;
  std::optional<MultiplierDiagnostics> multiplier;
};

/// One simulation at disturbance scale `scale` with the derived setup.
RunResult execute(const ExperimentConfig& config, const ExperimentSetup& setup, double scale);

/// Writes trace.csv and report.txt (plus rasters when enabled) into out_dir.
/// Returns 0, 2 when a required hypothesis check fails, 1 on faults.
int cmd_run(const ExperimentConfig& config, const std::string& out_dir, std::ostream& log);

/// One run per disturbance scale on `workers` threads, aggregated by scale.
int cmd_sweep(const ExperimentConfig& config, const std::string& out_dir, int workers, std::ostream& log);

struct VerifyRequest {
  std::string subject;  ///< gronwall | generalized-gronwall | gn
  std::vector<std::string> args;
  double T = 1.0;
  double C0 = 0.0;
  std::optional<double> tail;
  double C1 = 1.0;
  double C2 = 1.0;
  double C3 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  int instances = 100;
  std::uint64_t seed = 1;
};

/// gn: args N m q r p (p may be inf). gronwall: args <trace.csv>.
/// generalized-gronwall: no args runs the random self-test; otherwise a CSV
/// with columns t,F,h1,h2. Exit 0 iff the verdict holds.
int cmd_verify(const VerifyRequest& request, std::ostream& out);

}  // namespace dampwave
