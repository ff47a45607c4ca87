#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dampwave/analysis.hpp"
#include "dampwave/damping.hpp"
#include "dampwave/disturbance.hpp"
#include "dampwave/geometry.hpp"
#include "dampwave/grid.hpp"
#include "dampwave/wave_solver.hpp"

namespace dampwave {

inline constexpr const char* kTraceHeader = "t,E,Ew,D,residual,l2_u,l2_ut,h1_ut";

/// Shortest round-trip representation; NaN is written as "nan".
std::string format_number(double x);

void write_trace_csv(std::ostream& out, const RunRecord& record);
void write_trace_csv(const std::string& path, const RunRecord& record);

/// Reads a trace CSV. Columns are located by header name; `t` and `E` are
/// required, `Ew` is optional. Throws ParseError on malformed rows.
EnergyTrace read_trace_csv(std::istream& in);
EnergyTrace read_trace_csv(const std::string& path);

/// Row-major raster with header "x,y,value"; exterior nodes are skipped.
void write_raster_csv(const std::string& path, const Grid& grid, const Field& field);

/// Insertion-ordered `key = value` block.
class ReportWriter {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  void add(const std::string& key, long value);
  void add(const std::string& key, bool value);
  void add(const std::string& key, const char* value) { add(key, std::string(value)); }
  void add(const std::string& key, int value) { add(key, static_cast<long>(value)); }
  void add(const std::string& key, std::size_t value) { add(key, static_cast<long>(value)); }

  void add_h1(const H1Report& h1);
  void add_budgets(const std::string& prefix, const BudgetReport& b);
  void add_fit(const std::string& prefix, const std::optional<DecayFit>& fit);
  void add_multiplier(const MultiplierDiagnostics& m);
  void add_iss(const IssReport& iss);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace dampwave
