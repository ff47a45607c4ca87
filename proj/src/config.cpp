#include "dampwave/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dampwave/error.hpp"

namespace dampwave {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_number(item));
  return out;
}

bool parse_bool(const std::string& text) {
  const std::string v = lower(trim(text));
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw std::invalid_argument("expected a boolean, got '" + text + "'");
}

int parse_int(const std::string& text) {
  const double v = parse_number(text);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw std::invalid_argument("expected an integer, got '" + text + "'");
  return static_cast<int>(v);
}

Point parse_point(const std::string& text) {
  const auto xs = parse_list(text);
  if (xs.size() != 2) throw std::invalid_argument("expected a point 'x,y', got '" + text + "'");
  return {xs[0], xs[1]};
}

struct Call {
  std::string name;
  std::vector<double> args;
};

Call parse_call(const std::string& text) {
  const std::string t = trim(text);
  Call call;
  const auto open = t.find('(');
  if (open == std::string::npos) {
    call.name = lower(t);
    return call;
  }
  if (t.back() != ')') throw std::invalid_argument("unbalanced parentheses in '" + text + "'");
  call.name = lower(trim(t.substr(0, open)));
  const std::string inner = trim(t.substr(open + 1, t.size() - open - 2));
  if (!inner.empty()) call.args = parse_list(inner);
  return call;
}

void expect_args(const Call& c, std::size_t lo, std::size_t hi) {
  if (c.args.size() < lo || c.args.size() > hi) {
    throw std::invalid_argument("wrong number of arguments for rule '" + c.name + "'");
  }
}

int as_index(double v) {
  if (v != std::floor(v)) throw std::invalid_argument("mode indices must be integers");
  return static_cast<int>(v);
}

DampingFamily parse_family(const std::string& text) {
  const std::string v = lower(trim(text));
  if (v == "linear") return DampingFamily::linear;
  if (v == "saturating") return DampingFamily::saturating;
  if (v == "sublinear") return DampingFamily::sublinear;
  if (v == "cubic") return DampingFamily::cubic;
  if (v == "polynomial" || v == "custom") return DampingFamily::polynomial;
  throw std::invalid_argument("unknown damping family '" + text + "'");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

struct KeySpec {
  std::string key;
  std::string default_text;
  Setter set;
};

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      {"geometry.domain", "square",
       [](ExperimentConfig& c, const std::string& v) {
         const std::string s = lower(v);
         if (s == "square" || s == "rectangle") {
           c.geometry.domain.shape = DomainSpec::Shape::rectangle;
         } else if (s == "disk") {
           c.geometry.domain.shape = DomainSpec::Shape::disk;
         } else {
           throw std::invalid_argument("domain must be square, rectangle or disk");
         }
       }},
      {"geometry.width", "1", [](ExperimentConfig& c, const std::string& v) { c.geometry.domain.width = parse_number(v); }},
      {"geometry.height", "1",
       [](ExperimentConfig& c, const std::string& v) { c.geometry.domain.height = parse_number(v); }},
      {"geometry.radius", "1",
       [](ExperimentConfig& c, const std::string& v) { c.geometry.domain.radius = parse_number(v); }},
      {"geometry.x0", "-1,-1", [](ExperimentConfig& c, const std::string& v) { c.geometry.x0 = parse_point(v); }},
      {"geometry.epsilon", "0.25",
       [](ExperimentConfig& c, const std::string& v) { c.geometry.epsilon = parse_number(v); }},
      {"geometry.eps0", "epsilon/4", [](ExperimentConfig& c, const std::string& v) { c.geometry.eps0 = parse_number(v); }},
      {"geometry.eps1", "epsilon/2", [](ExperimentConfig& c, const std::string& v) { c.geometry.eps1 = parse_number(v); }},
      {"geometry.eps2", "3epsilon/4",
       [](ExperimentConfig& c, const std::string& v) { c.geometry.eps2 = parse_number(v); }},
      {"geometry.omega", "mgc",
       [](ExperimentConfig& c, const std::string& v) {
         const std::string s = lower(v);
         if (s == "mgc") {
           c.geometry.omega = OmegaKind::mgc;
         } else if (s == "band") {
           c.geometry.omega = OmegaKind::band;
         } else if (s == "full") {
           c.geometry.omega = OmegaKind::full;
         } else if (s == "none") {
           c.geometry.omega = OmegaKind::none;
         } else {
           throw std::invalid_argument("omega must be mgc, band, full or none");
         }
       }},
      {"geometry.omega_width", "0.25",
       [](ExperimentConfig& c, const std::string& v) { c.geometry.omega_width = parse_number(v); }},
      {"geometry.a0", "1", [](ExperimentConfig& c, const std::string& v) { c.geometry.a0 = parse_number(v); }},
      {"geometry.profile", "constant",
       [](ExperimentConfig& c, const std::string& v) {
         const std::string s = lower(v);
         if (s == "constant") {
           c.geometry.profile = LocalizationProfile::constant;
         } else if (s == "smooth") {
           c.geometry.profile = LocalizationProfile::smooth;
         } else {
           throw std::invalid_argument("profile must be constant or smooth");
         }
       }},
      {"geometry.require_mgc", "false",
       [](ExperimentConfig& c, const std::string& v) { c.geometry.require_mgc = parse_bool(v); }},

      {"damping.family", "linear",
       [](ExperimentConfig& c, const std::string& v) { c.damping.family = parse_family(v); }},
      {"damping.kappa", "1", [](ExperimentConfig& c, const std::string& v) { c.damping.kappa = parse_number(v); }},
      {"damping.coeffs", "", [](ExperimentConfig& c, const std::string& v) { c.damping.coeffs = parse_list(v); }},
      {"damping.q", "family default", [](ExperimentConfig& c, const std::string& v) { c.damping.q = parse_number(v); }},
      {"damping.m", "family default", [](ExperimentConfig& c, const std::string& v) { c.damping.m = parse_number(v); }},
      {"damping.c_growth", "family default",
       [](ExperimentConfig& c, const std::string& v) { c.damping.c_growth = parse_number(v); }},
      {"damping.require_h1", "false",
       [](ExperimentConfig& c, const std::string& v) { c.damping.require_h1 = parse_bool(v); }},
      {"damping.h1_range", "10", [](ExperimentConfig& c, const std::string& v) { c.damping.h1_range = parse_number(v); }},
      {"damping.h1_samples", "2001",
       [](ExperimentConfig& c, const std::string& v) {
         const int n = parse_int(v);
         if (n < 100) throw std::invalid_argument("h1_samples must be >= 100");
         c.damping.h1_samples = static_cast<std::size_t>(n);
       }},

      {"disturbance.d_time", "zero",
       [](ExperimentConfig& c, const std::string& v) { c.disturbance.spec.d.time = parse_time_rule(v); }},
      {"disturbance.d_space", "constant(0)",
       [](ExperimentConfig& c, const std::string& v) { c.disturbance.spec.d.space = parse_space_rule(v); }},
      {"disturbance.e_time", "zero",
       [](ExperimentConfig& c, const std::string& v) { c.disturbance.spec.e.time = parse_time_rule(v); }},
      {"disturbance.e_space", "constant(0)",
       [](ExperimentConfig& c, const std::string& v) { c.disturbance.spec.e.space = parse_space_rule(v); }},
      {"disturbance.scale", "1",
       [](ExperimentConfig& c, const std::string& v) { c.disturbance.spec.scale = parse_number(v); }},
      {"disturbance.scales", "0,1",
       [](ExperimentConfig& c, const std::string& v) { c.disturbance.scales = parse_list(v); }},
      {"disturbance.quadrature_dt", "0.01",
       [](ExperimentConfig& c, const std::string& v) { c.disturbance.quadrature_dt = parse_number(v); }},
      {"disturbance.budget_horizon", "solver.horizon",
       [](ExperimentConfig& c, const std::string& v) { c.disturbance.budget_horizon = parse_number(v); }},

      {"solver.h", "1/32", [](ExperimentConfig& c, const std::string& v) { c.solver.h = parse_number(v); }},
      {"solver.dt", "auto",
       [](ExperimentConfig& c, const std::string& v) {
         if (lower(v) == "auto") {
           c.solver.dt.reset();
         } else {
           c.solver.dt = parse_number(v);
         }
       }},
      {"solver.horizon", "10", [](ExperimentConfig& c, const std::string& v) { c.solver.horizon = parse_number(v); }},
      {"solver.stride", "10", [](ExperimentConfig& c, const std::string& v) { c.solver.stride = parse_int(v); }},
      {"solver.snapshots", "false",
       [](ExperimentConfig& c, const std::string& v) { c.solver.snapshots = parse_bool(v); }},
      {"solver.initial_u", "eigenmode(1,1,1)",
       [](ExperimentConfig& c, const std::string& v) { c.solver.initial_u = parse_initial_rule(v); }},
      {"solver.initial_v", "zero",
       [](ExperimentConfig& c, const std::string& v) { c.solver.initial_v = parse_initial_rule(v); }},
      {"solver.backend", "parallel",
       [](ExperimentConfig& c, const std::string& v) {
         const std::string s = lower(v);
         if (s == "parallel") {
           c.solver.backend = kernels::Backend::parallel;
         } else if (s == "reference") {
           c.solver.backend = kernels::Backend::reference;
         } else {
           throw std::invalid_argument("backend must be parallel or reference");
         }
       }},

      {"analysis.fit_start", "horizon/2",
       [](ExperimentConfig& c, const std::string& v) { c.analysis.fit_start = parse_number(v); }},
      {"analysis.fit_end", "horizon",
       [](ExperimentConfig& c, const std::string& v) { c.analysis.fit_end = parse_number(v); }},
      {"analysis.gn_q", "4", [](ExperimentConfig& c, const std::string& v) { c.analysis.gn_q = parse_number(v); }},
      {"analysis.multiplier", "false",
       [](ExperimentConfig& c, const std::string& v) { c.analysis.multiplier = parse_bool(v); }},
      {"analysis.window_S", "0",
       [](ExperimentConfig& c, const std::string& v) { c.analysis.window_S = parse_number(v); }},
      {"analysis.window_T", "horizon",
       [](ExperimentConfig& c, const std::string& v) { c.analysis.window_T = parse_number(v); }},

      {"output.dir", "out", [](ExperimentConfig& c, const std::string& v) { c.output.dir = v; }},
      {"output.rasters", "false",
       [](ExperimentConfig& c, const std::string& v) { c.output.rasters = parse_bool(v); }},

      {"experiment.seed", "0",
       [](ExperimentConfig& c, const std::string& v) {
         const double s = parse_number(v);
         if (s < 0 || s != std::floor(s)) throw std::invalid_argument("seed must be a non-negative integer");
         c.seed = static_cast<std::uint64_t>(s);
       }},
  };
  return table;
}

}  // namespace

double parse_number(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw std::invalid_argument("expected a number, got an empty value");
  const auto slash = t.rfind('/');
  if (slash != std::string::npos) {
    const double num = parse_number(t.substr(0, slash));
    const double den = parse_number(t.substr(slash + 1));
    if (den == 0.0) throw std::invalid_argument("division by zero in '" + text + "'");
    return num / den;
  }
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) throw std::invalid_argument("expected a number, got '" + text + "'");
  if (std::isnan(v)) throw std::invalid_argument("NaN is not a valid value");
  return v;
}

TimeProfile parse_time_rule(const std::string& text) {
  const Call c = parse_call(text);
  if (c.name == "zero") {
    expect_args(c, 0, 0);
    return TimeProfile::zero();
  }
  if (c.name == "exp") {
    expect_args(c, 1, 2);
    return c.args.size() == 2 ? TimeProfile::exp_decay(c.args[0], c.args[1]) : TimeProfile::exp_decay(c.args[0]);
  }
  if (c.name == "pulse") {
    expect_args(c, 2, 2);
    return TimeProfile::pulse(c.args[0], c.args[1]);
  }
  throw std::invalid_argument("unknown time rule '" + text + "'");
}

SpaceProfile parse_space_rule(const std::string& text) {
  const Call c = parse_call(text);
  if (c.name == "gaussian") {
    expect_args(c, 3, 4);
    return SpaceProfile::gaussian({c.args[0], c.args[1]}, c.args[2], c.args.size() == 4 ? c.args[3] : 1.0);
  }
  if (c.name == "eigenmode") {
    expect_args(c, 2, 3);
    return SpaceProfile::eigenmode(as_index(c.args[0]), as_index(c.args[1]), c.args.size() == 3 ? c.args[2] : 1.0);
  }
  if (c.name == "constant") {
    expect_args(c, 1, 1);
    return SpaceProfile::constant(c.args[0]);
  }
  throw std::invalid_argument("unknown space rule '" + text + "'");
}

InitialRule parse_initial_rule(const std::string& text) {
  const Call c = parse_call(text);
  if (c.name == "zero") {
    expect_args(c, 0, 0);
    return InitialRule::zero();
  }
  if (c.name == "eigenmode") {
    expect_args(c, 2, 3);
    return InitialRule::eigenmode(as_index(c.args[0]), as_index(c.args[1]), c.args.size() == 3 ? c.args[2] : 1.0);
  }
  if (c.name == "gaussian") {
    expect_args(c, 3, 4);
    return InitialRule::gaussian({c.args[0], c.args[1]}, c.args[2], c.args.size() == 4 ? c.args[3] : 1.0);
  }
  throw std::invalid_argument("unknown initial rule '" + text + "'");
}

CutoffRadii GeometryConfig::radii() const {
  CutoffRadii r = CutoffRadii::defaults(epsilon);
  if (eps0) r.eps0 = *eps0;
  if (eps1) r.eps1 = *eps1;
  if (eps2) r.eps2 = *eps2;
  return r;
}

DampingLaw DampingConfig::law() const {
  DampingLaw base = [&] {
    switch (family) {
      case DampingFamily::linear:
        return DampingLaw::linear(kappa);
      case DampingFamily::saturating:
        return DampingLaw::saturating();
      case DampingFamily::sublinear:
        return DampingLaw::sublinear();
      case DampingFamily::cubic:
        return DampingLaw::cubic();
      case DampingFamily::polynomial:
        return DampingLaw::polynomial(coeffs);
    }
    return DampingLaw::linear(kappa);
  }();
  if (q || m || c_growth) {
    base = base.with_exponents(q.value_or(base.q()), m.value_or(base.m()), c_growth.value_or(base.c_growth()));
  }
  return base;
}

double ExperimentConfig::dt() const {
  return solver.dt.value_or(SimConfig::cfl_safety * solver.h / std::numbers::sqrt2);
}

std::string config_digest(const std::map<std::string, std::string>& entries) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (const auto& [key, value] : entries) {
    const std::string line = key + "=" + value + "\n";
    for (unsigned char ch : line) {
      hash ^= ch;
      hash *= 1099511628211ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

const std::vector<std::pair<std::string, std::string>>& config_keys() {
  static const std::vector<std::pair<std::string, std::string>> keys = [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& k : key_table()) out.emplace_back(k.key, k.default_text);
    return out;
  }();
  return keys;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::map<std::string, int> seen;
  bool square = true;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'section.key = value'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& table = key_table();
    const auto it = std::find_if(table.begin(), table.end(), [&](const KeySpec& k) { return k.key == key; });
    if (it == table.end()) throw ParseError("unknown key '" + key + "'", line_no);
    if (auto prev = seen.find(key); prev != seen.end()) {
      throw ParseError("duplicate key '" + key + "' (first set on line " + std::to_string(prev->second) + ", again on line " +
                           std::to_string(line_no) + ")",
                       line_no);
    }
    if (value.empty()) throw ParseError("missing value for '" + key + "'", line_no);
    seen[key] = line_no;
    try {
      it->set(cfg, value);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(key + ": " + e.what(), line_no);
    }
    if (key == "geometry.domain") square = lower(value) == "square";
    cfg.entries[key] = value;
  }

  auto line_of = [&](const std::string& key) {
    const auto f = seen.find(key);
    return f == seen.end() ? 0 : f->second;
  };
  auto fail = [&](const std::string& key, const std::string& what) { throw ParseError(what, line_of(key)); };

  GeometryConfig& g = cfg.geometry;
  if (square && g.domain.shape == DomainSpec::Shape::rectangle) {
    if (seen.count("geometry.width") && !seen.count("geometry.height")) g.domain.height = g.domain.width;
    if (seen.count("geometry.height") && !seen.count("geometry.width")) g.domain.width = g.domain.height;
  }
  if (!(g.epsilon > 0.0)) fail("geometry.epsilon", "geometry.epsilon must be positive");
  try {
    g.radii().validate();
  } catch (const std::exception& e) {
    fail(seen.count("geometry.eps0") ? "geometry.eps0" : "geometry.epsilon", e.what());
  }
  if (g.omega != OmegaKind::none && !(g.a0 > 0.0)) fail("geometry.a0", "geometry.a0 must be positive");
  if (g.omega == OmegaKind::band && !(g.omega_width > 0.0)) fail("geometry.omega_width", "omega_width must be positive");

  try {
    (void)cfg.damping.law();
  } catch (const std::exception& e) {
    fail(seen.count("damping.coeffs") ? "damping.coeffs" : "damping.family", e.what());
  }
  if (!(cfg.damping.h1_range >= 1.0)) fail("damping.h1_range", "h1_range must be >= 1");

  SolverConfig& s = cfg.solver;
  if (!(s.h > 0.0)) fail("solver.h", "solver.h must be positive");
  try {
    (void)build_grid(g.domain, s.h);
  } catch (const std::exception& e) {
    fail(seen.count("solver.h") ? "solver.h" : "geometry.domain", e.what());
  }
  const double cfl = SimConfig::cfl_safety * s.h / std::numbers::sqrt2;
  if (s.dt) {
    if (!(*s.dt > 0.0)) fail("solver.dt", "solver.dt must be positive");
    if (*s.dt > cfl * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << "CFL violation: solver.dt = " << *s.dt << " exceeds 0.9 h/sqrt(2) = " << cfl;
      fail("solver.dt", os.str());
    }
  }
  if (!(s.horizon > 0.0)) fail("solver.horizon", "solver.horizon must be positive");
  if (s.stride < 1) fail("solver.stride", "solver.stride must be >= 1");

  if (cfg.disturbance.scales.empty()) fail("disturbance.scales", "scale list is empty");
  for (double sc : cfg.disturbance.scales) {
    if (!std::isfinite(sc) || sc < 0.0) fail("disturbance.scales", "scales must be finite and non-negative");
  }
  if (!(cfg.disturbance.quadrature_dt > 0.0)) fail("disturbance.quadrature_dt", "quadrature_dt must be positive");
  if (cfg.disturbance.budget_horizon && !(*cfg.disturbance.budget_horizon > 0.0)) {
    fail("disturbance.budget_horizon", "budget_horizon must be positive");
  }

  if (!(cfg.fit_start() >= 0.0 && cfg.fit_start() < cfg.fit_end())) {
    fail("analysis.fit_start", "fit window must satisfy 0 <= fit_start < fit_end");
  }
  if (!(cfg.analysis.gn_q > 2.0)) fail("analysis.gn_q", "gn_q must exceed 2");
  const double wT = cfg.analysis.window_T.value_or(s.horizon);
  if (!(cfg.analysis.window_S >= 0.0 && cfg.analysis.window_S < wT)) {
    fail("analysis.window_S", "multiplier window must satisfy 0 <= S < T");
  }

  cfg.digest = config_digest(cfg.entries);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace dampwave
