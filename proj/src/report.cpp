#include "dampwave/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dampwave/config.hpp"
#include "dampwave/error.hpp"

namespace dampwave {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const RunRecord& r) {
  out << kTraceHeader << '\n';
  for (std::size_t k = 0; k < r.size(); ++k) {
    out << format_number(r.t[k]) << ',' << format_number(r.E[k]) << ',' << format_number(r.Ew[k]) << ','
        << format_number(r.D[k]) << ',' << format_number(r.residual[k]) << ',' << format_number(r.l2_u[k]) << ','
        << format_number(r.l2_ut[k]) << ',' << format_number(r.h1_ut[k]) << '\n';
  }
}

void write_trace_csv(const std::string& path, const RunRecord& record) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  write_trace_csv(out, record);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_cell(const std::string& cell, int line) {
  std::string t;
  for (char c : cell) {
    if (c != ' ' && c != '\t') t += c;
  }
  if (t == "nan" || t == "NaN") return std::nan("");
  try {
    return parse_number(t);
  } catch (const std::exception&) {
    throw ParseError("malformed number '" + cell + "'", line);
  }
}

}  // namespace

EnergyTrace read_trace_csv(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty trace file", 1);
  ++line_no;
  const auto header = split_csv(line);
  int col_t = -1;
  int col_e = -1;
  int col_ew = -1;
  for (std::size_t k = 0; k < header.size(); ++k) {
    std::string name;
    for (char c : header[k]) {
      if (c != ' ' && c != '\t') name += c;
    }
    if (name == "t") col_t = static_cast<int>(k);
    if (name == "E") col_e = static_cast<int>(k);
    if (name == "Ew") col_ew = static_cast<int>(k);
  }
  if (col_t < 0 || col_e < 0) throw ParseError("trace header must contain columns t and E", 1);

  EnergyTrace trace;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) throw ParseError("expected " + std::to_string(header.size()) + " columns", line_no);
    trace.t.push_back(parse_cell(cells[static_cast<std::size_t>(col_t)], line_no));
    trace.E.push_back(parse_cell(cells[static_cast<std::size_t>(col_e)], line_no));
    if (col_ew >= 0) trace.Ew.push_back(parse_cell(cells[static_cast<std::size_t>(col_ew)], line_no));
    const std::size_t k = trace.t.size() - 1;
    if (!std::isfinite(trace.t[k]) || !(trace.E[k] >= 0.0)) throw ParseError("invalid t or E value", line_no);
    if (k > 0 && !(trace.t[k] > trace.t[k - 1])) throw ParseError("times must be strictly increasing", line_no);
  }
  if (trace.t.empty()) throw ParseError("trace has no rows", line_no);
  return trace;
}

EnergyTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace '" + path + "'");
  return read_trace_csv(in);
}

void write_raster_csv(const std::string& path, const Grid& grid, const Field& field) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << "x,y,value\n";
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (grid.kind(idx) == NodeKind::exterior) continue;
    const Point p = grid.node(idx);
    out << format_number(p.x) << ',' << format_number(p.y) << ',' << format_number(field[idx]) << '\n';
  }
}

void ReportWriter::add(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }
void ReportWriter::add(const std::string& key, double value) { add(key, format_number(value)); }
void ReportWriter::add(const std::string& key, long value) { add(key, std::to_string(value)); }
void ReportWriter::add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }

void ReportWriter::add_h1(const H1Report& h1) {
  add("h1.passed", h1.passed());
  add("h1.g_zero", h1.g_zero);
  add("h1.g_prime_positive", h1.g_prime_positive);
  add("h1.monotone", h1.monotone);
  add("h1.sign", h1.sign);
  add("h1.growth_g", h1.growth_g);
  add("h1.growth_g_prime", h1.growth_g_prime);
  add("h1.exponent_ok", h1.exponent_ok);
  add("h1.q_hat", h1.q_hat);
  add("h1.m_hat", h1.m_hat);
  if (h1.worst_x) {
    add("h1.worst_x", *h1.worst_x);
    add("h1.worst_clause", h1.worst_clause);
  }
}

void ReportWriter::add_budgets(const std::string& prefix, const BudgetReport& b) {
  add(prefix + "C1_d", b.c1_d);
  add(prefix + "C2_d", b.c2_d);
  add(prefix + "C3_d", b.c3_d);
  add(prefix + "C4_d", b.c4_d);
  add(prefix + "C5_d", b.c5_d);
  add(prefix + "C6_d", b.c6_d);
  add(prefix + "Cbar1_e", b.cbar1_e);
  add(prefix + "Cbar2_e", b.cbar2_e);
  add(prefix + "Cbar3_e", b.cbar3_e);
  add(prefix + "budget_p", b.p);
  add(prefix + "budget_horizon", b.horizon);
  std::string names;
  for (const auto& n : b.truncated) names += (names.empty() ? "" : ",") + n;
  add(prefix + "budget_truncated", names.empty() ? std::string("none") : names);
}

void ReportWriter::add_fit(const std::string& prefix, const std::optional<DecayFit>& fit) {
  if (!fit) {
    add(prefix + "fit", "degenerate");
    return;
  }
  add(prefix + "rate", fit->rate);
  add(prefix + "amplitude", fit->amplitude);
  add(prefix + "r2", fit->r2);
  add(prefix + "samples", fit->samples);
}

void ReportWriter::add_multiplier(const MultiplierDiagnostics& m) {
  add("multiplier.S", m.S);
  add("multiplier.T", m.T);
  add("multiplier.T1", m.t1);
  add("multiplier.T2", m.t2);
  add("multiplier.T3", m.t3);
  add("multiplier.T4", m.t4);
  add("multiplier.T5", m.t5);
  add("multiplier.energy_integral", m.energy_integral);
  add("multiplier.slack", m.slack);
  add("multiplier.rho", m.rho);
  add("multiplier.samples", m.samples);
}

void ReportWriter::add_iss(const IssReport& iss) {
  add("iss.fit_start_fraction", iss.fit_start_fraction);
  add("iss.decays_exponentially", iss.decays_exponentially);
  add("iss.remains_bounded", iss.remains_bounded);
  add("iss.gain_monotone", iss.gain_monotone);
  add("iss.rows", iss.rows.size());
  for (std::size_t k = 0; k < iss.rows.size(); ++k) {
    const IssRow& row = iss.rows[k];
    const std::string p = "iss.row" + std::to_string(k) + ".";
    add(p + "scale", row.scale);
    add(p + "E0", row.e0);
    add(p + "E_max", row.e_max);
    add(p + "E_inf", row.e_inf);
    add_fit(p, row.fit);
    add_budgets(p, row.budgets);
  }
}

std::string ReportWriter::str() const {
  std::ostringstream os;
  for (const auto& [k, v] : entries_) os << k << " = " << v << '\n';
  return os.str();
}

void ReportWriter::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << str();
}

}  // namespace dampwave
