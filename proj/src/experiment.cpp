#include "dampwave/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "dampwave/error.hpp"
#include "dampwave/report.hpp"

namespace dampwave {

namespace fs = std::filesystem;

const char* tool_version() { return DAMPWAVE_VERSION; }

ExperimentSetup build_setup(const ExperimentConfig& config) {
  const GeometryConfig& geo = config.geometry;
  ExperimentSetup s;
  s.grid = build_grid(geo.domain, config.solver.h);
  s.gamma = gamma_region(s.grid, geo.x0);
  const CutoffRadii radii = geo.radii();
  radii.validate();

  switch (geo.omega) {
    case OmegaKind::mgc:
      s.omega = epsilon_neighborhood(s.grid, s.gamma, geo.epsilon);
      break;
    case OmegaKind::band:
      s.omega = epsilon_neighborhood(s.grid, s.gamma, geo.omega_width);
      break;
    case OmegaKind::full:
      s.omega.assign(s.grid.size(), 0);
      for (std::size_t idx : s.grid.interior_nodes()) s.omega[idx] = 1;
      break;
    case OmegaKind::none:
      s.omega.assign(s.grid.size(), 0);
      break;
  }
  if (geo.omega == OmegaKind::none) {
    s.localization.a = s.grid.zeros();
  } else {
    s.localization = build_localization(s.omega, geo.a0, geo.profile, s.grid, radii.eps - radii.eps2);
  }
  s.cutoffs = build_cutoffs(s.grid, s.gamma, radii);
  s.mgc = check_mgc(s.omega, s.gamma, geo.epsilon, s.grid);

  s.law = config.damping.law();
  s.h1 = verify_h1(s.law, -config.damping.h1_range, config.damping.h1_range, config.damping.h1_samples);

  s.sim.grid = s.grid;
  s.sim.a = s.localization.a;
  s.sim.law = s.law;
  s.sim.disturbance = config.disturbance.spec;
  s.sim.dt = config.dt();
  s.sim.horizon = config.solver.horizon;
  s.sim.record_stride = config.solver.stride;
  s.sim.initial_u = config.solver.initial_u;
  s.sim.initial_v = config.solver.initial_v;
  s.sim.store_snapshots = config.solver.snapshots || config.analysis.multiplier;
  s.sim.backend = config.solver.backend;
  return s;
}

RunResult execute(const ExperimentConfig& config, const ExperimentSetup& setup, double scale) {
  SimConfig sim = setup.sim;
  sim.disturbance = config.disturbance.spec.scaled(scale);
  const WaveSolver solver(sim);

  RunResult res;
  res.record = solver.run();
  res.budgets = compute_budgets(sim.disturbance, sim.law, config.disturbance.budget_horizon.value_or(sim.horizon),
                                sim.grid, config.disturbance.quadrature_dt);
  const EnergyTrace trace = EnergyTrace::from_record(res.record, config.digest);
  try {
    res.fit = fit_decay(trace, config.fit_start(), config.fit_end());
  } catch (const DegenerateError&) {
    res.fit.reset();
  }
  if (!res.record.snapshots.empty()) {
    try {
      res.gn = gn_trajectory_ratio(solver, res.record.snapshots, config.analysis.gn_q);
    } catch (const DegenerateError&) {
      res.gn.reset();
    }
  }
  if (config.analysis.multiplier) {
    res.multiplier = multiplier_terms(solver, res.record.snapshots, setup.cutoffs, setup.omega,
                                      config.analysis.window_S, config.analysis.window_T.value_or(sim.horizon));
  }
  return res;
}

namespace {

void describe_mgc(const ExperimentSetup& s, std::ostream& log) {
  log << "MGC violated: " << s.mgc.violations.size() << " interior node(s) of N_eps(gamma) lie outside omega\n";
  const std::size_t shown = std::min<std::size_t>(s.mgc.violations.size(), 20);
  for (std::size_t k = 0; k < shown; ++k) {
    const Point p = s.grid.node(s.mgc.violations[k]);
    log << "  node " << s.mgc.violations[k] << " at (" << format_number(p.x) << ", " << format_number(p.y) << ")\n";
  }
  if (shown < s.mgc.violations.size()) log << "  ...\n";
}

void describe_h1(const H1Report& h1, std::ostream& log) {
  log << "H1 violated";
  if (!h1.worst_clause.empty()) log << ": clause '" << h1.worst_clause << "'";
  if (h1.worst_x) log << " at x = " << format_number(*h1.worst_x);
  log << '\n';
}

/// Returns kExitHypothesis when a required check fails.
int check_hypotheses(const ExperimentConfig& config, const ExperimentSetup& setup, std::ostream& log) {
  int code = kExitOk;
  if (config.geometry.require_mgc && !setup.mgc.satisfied) {
    describe_mgc(setup, log);
    code = kExitHypothesis;
  }
  if (config.damping.require_h1 && !setup.h1.passed()) {
    describe_h1(setup.h1, log);
    code = kExitHypothesis;
  }
  return code;
}

void add_header(ReportWriter& w, const ExperimentConfig& config, const ExperimentSetup& setup, const char* command) {
  w.add("tool_version", tool_version());
  w.add("config_digest", config.digest);
  w.add("command", command);
  w.add("domain", config.geometry.domain.shape == DomainSpec::Shape::disk ? "disk" : "rectangle");
  w.add("h", setup.grid.spacing());
  w.add("interior_nodes", setup.grid.interior_count());
  w.add("horizon", config.solver.horizon);
  w.add("damping.law", setup.law.describe());
  w.add_h1(setup.h1);
  w.add("mgc.satisfied", setup.mgc.satisfied);
  w.add("mgc.violations", setup.mgc.violations.size());
}

void add_run_block(ReportWriter& w, const RunResult& r) {
  const RunRecord& rec = r.record;
  w.add("dt", rec.dt);
  w.add("samples", rec.size());
  w.add("E0", rec.E.front());
  w.add("E_final", rec.E.back());
  w.add("E_max", *std::max_element(rec.E.begin(), rec.E.end()));
  double max_res = 0.0;
  for (double x : rec.residual) {
    if (std::isfinite(x)) max_res = std::max(max_res, x);
  }
  w.add("residual_max", max_res);
  w.add_fit("fit.", r.fit);
  w.add_budgets("", r.budgets);
  if (r.gn) {
    w.add("gn.max_ratio", r.gn->max_ratio);
    w.add("gn.time", r.gn->time);
  }
  if (r.multiplier) w.add_multiplier(*r.multiplier);
  std::string warnings;
  for (const auto& s : rec.warnings) warnings += (warnings.empty() ? "" : "; ") + s;
  w.add("warnings", warnings.empty() ? std::string("none") : warnings);
}

std::string scale_tag(double s) { return format_number(s); }

}  // namespace

int cmd_run(const ExperimentConfig& config, const std::string& out_dir, std::ostream& log) {
  const auto started = std::chrono::steady_clock::now();
  try {
    const ExperimentSetup setup = build_setup(config);
    if (int code = check_hypotheses(config, setup, log); code != kExitOk) return code;

    const RunResult result = execute(config, setup, config.disturbance.spec.scale);
    for (const auto& w : result.record.warnings) log << "warning: " << w << '\n';
    fs::create_directories(out_dir);
    write_trace_csv((fs::path(out_dir) / "trace.csv").string(), result.record);
    if (config.output.rasters) {
      const auto dir = fs::path(out_dir);
      Field omega(setup.omega.begin(), setup.omega.end());
      write_raster_csv((dir / "raster_a.csv").string(), setup.grid, setup.localization.a);
      write_raster_csv((dir / "raster_omega.csv").string(), setup.grid, omega);
      write_raster_csv((dir / "raster_psi.csv").string(), setup.grid, setup.cutoffs.psi);
      write_raster_csv((dir / "raster_xi.csv").string(), setup.grid, setup.cutoffs.xi);
      write_raster_csv((dir / "raster_beta.csv").string(), setup.grid, setup.cutoffs.beta);
    }

    ReportWriter w;
    add_header(w, config, setup, "run");
    w.add("scale", config.disturbance.spec.scale);
    add_run_block(w, result);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    w.add("wall_time_s", wall);
    w.write((fs::path(out_dir) / "report.txt").string());
    log << "run finished: " << result.record.size() << " samples, E(0) = " << format_number(result.record.E.front())
        << ", E(T) = " << format_number(result.record.E.back()) << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitFault;
  }
}

int cmd_sweep(const ExperimentConfig& config, const std::string& out_dir, int workers, std::ostream& log) {
  const auto started = std::chrono::steady_clock::now();
  try {
    std::vector<double> scales = config.disturbance.scales;
    std::sort(scales.begin(), scales.end());
    scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
    if (std::find(scales.begin(), scales.end(), 0.0) == scales.end()) {
      throw ConfigError("sweep scales must include 0");
    }

    const ExperimentSetup setup = build_setup(config);
    if (int code = check_hypotheses(config, setup, log); code != kExitOk) return code;

    std::vector<std::optional<RunResult>> results(scales.size());
    std::vector<std::exception_ptr> errors(scales.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (std::size_t k = next++; k < scales.size(); k = next++) {
        try {
          results[k] = execute(config, setup, scales[k]);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    };
    const int n_threads = std::clamp(workers, 1, static_cast<int>(scales.size()));
    std::vector<std::thread> pool;
    for (int k = 1; k < n_threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }

    fs::create_directories(out_dir);
    std::vector<ScaledTrace> traces;
    for (std::size_t k = 0; k < scales.size(); ++k) {
      write_trace_csv((fs::path(out_dir) / ("trace_s" + scale_tag(scales[k]) + ".csv")).string(), results[k]->record);
      traces.push_back({scales[k], EnergyTrace::from_record(results[k]->record, config.digest), results[k]->budgets});
    }
    const double fraction = config.fit_start() / config.solver.horizon;
    const IssReport iss = iss_report(traces, fraction);

    ReportWriter w;
    add_header(w, config, setup, "sweep");
    w.add("dt", results.front()->record.dt);
    w.add_iss(iss);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    w.add("wall_time_s", wall);
    w.write((fs::path(out_dir) / "report.txt").string());

    log << "sweep finished: " << scales.size() << " scale(s)\n";
    for (const auto& row : iss.rows) {
      log << "  scale " << format_number(row.scale) << ": E_inf = " << format_number(row.e_inf) << '\n';
    }
    log << "decays_exponentially = " << (iss.decays_exponentially ? "true" : "false")
        << ", remains_bounded = " << (iss.remains_bounded ? "true" : "false")
        << ", gain_monotone = " << (iss.gain_monotone ? "true" : "false") << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitFault;
  }
}

namespace {

struct NumericTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  const std::vector<double>& column(const std::string& name) const {
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (header[k] == name) return columns[k];
    }
    throw ParseError("missing column '" + name + "'", 1);
  }
};

NumericTable read_numeric_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  NumericTable table;
  std::string line;
  int line_no = 0;
  auto cells = [](const std::string& s) {
    std::vector<std::string> out(1);
    for (char c : s) {
      if (c == ',') {
        out.emplace_back();
      } else if (c != ' ' && c != '\t' && c != '\r') {
        out.back() += c;
      }
    }
    return out;
  };
  if (!std::getline(in, line)) throw ParseError("empty file", 1);
  ++line_no;
  table.header = cells(line);
  table.columns.resize(table.header.size());
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto row = cells(line);
    if (row.size() != table.header.size()) throw ParseError("wrong number of columns", line_no);
    for (std::size_t k = 0; k < row.size(); ++k) {
      try {
        table.columns[k].push_back(parse_number(row[k]));
      } catch (const std::invalid_argument&) {
        throw ParseError("malformed number '" + row[k] + "'", line_no);
      }
    }
  }
  return table;
}

int verify_gn(const VerifyRequest& req, std::ostream& out) {
  if (req.args.size() != 5) throw std::invalid_argument("gn expects five parameters: N m q r p");
  std::vector<double> v;
  for (const auto& a : req.args) v.push_back(parse_number(a));
  const GnTheta th = gn_theta(v[0], v[1], v[2], v[3], v[4]);
  out << "theta = " << format_number(th.theta) << '\n';
  out << "boundary = " << (th.boundary ? "true" : "false") << '\n';
  return kExitOk;
}

int verify_gronwall(const VerifyRequest& req, std::ostream& out) {
  if (req.args.size() != 1) throw std::invalid_argument("gronwall expects one trace CSV");
  const EnergyTrace trace = read_trace_csv(req.args[0]);
  const GronwallResult r = gronwall_check(trace, req.T, req.C0, req.tail);
  out << "verdict = " << to_string(r.verdict) << '\n';
  out << "hypothesis_margin = " << format_number(r.hypothesis_margin) << '\n';
  out << "conclusion_margin = " << format_number(r.conclusion_margin) << '\n';
  if (r.pointwise_margin) out << "pointwise_margin = " << format_number(*r.pointwise_margin) << '\n';
  out << "worst_time = " << format_number(trace.t[r.worst_index]) << '\n';
  return r.verdict == GronwallVerdict::holds ? kExitOk : kExitHypothesis;
}

int verify_generalized(const VerifyRequest& req, std::ostream& out) {
  if (req.args.empty()) {
    const auto st = generalized_gronwall_self_test(req.instances, req.seed);
    out << st.holds << "/" << st.instances << " bound holds\n";
    return st.holds == st.instances ? kExitOk : kExitHypothesis;
  }
  if (req.args.size() != 1) throw std::invalid_argument("generalized-gronwall expects at most one CSV");
  const NumericTable table = read_numeric_csv(req.args[0]);
  GeneralizedGronwallInput in;
  in.t = table.column("t");
  in.F = table.column("F");
  in.h1 = table.column("h1");
  in.h2 = table.column("h2");
  in.C1 = req.C1;
  in.C2 = req.C2;
  in.C3 = req.C3;
  in.alpha1 = req.alpha1;
  in.alpha2 = req.alpha2;
  const auto r = generalized_gronwall_bound(in);
  out << "applicable = " << (r.applicable ? "true" : "false") << '\n';
  out << "worst_hypothesis_gap = " << format_number(r.worst_hypothesis_gap) << '\n';
  out << "c_tilde = " << format_number(r.c_tilde) << '\n';
  out << "alpha = " << format_number(r.alpha) << '\n';
  out << "bound = " << format_number(r.bound) << '\n';
  out << "sup_F = " << format_number(r.sup_F) << '\n';
  out << "bound_holds = " << (r.bound_holds ? "true" : "false") << '\n';
  return r.applicable && r.bound_holds ? kExitOk : kExitHypothesis;
}

}  // namespace

int cmd_verify(const VerifyRequest& request, std::ostream& out) {
  try {
    if (request.subject == "gn") return verify_gn(request, out);
    if (request.subject == "gronwall") return verify_gronwall(request, out);
    if (request.subject == "generalized-gronwall") return verify_generalized(request, out);
    throw std::invalid_argument("unknown verify subject '" + request.subject + "'");
  } catch (const std::exception& e) {
    out << "error: " << e.what() << '\n';
    return kExitFault;
  }
}

}  // namespace dampwave
