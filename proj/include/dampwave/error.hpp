#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dampwave {

/// Invalid or inconsistent user configuration (bad spacing, CFL, radii...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A damping law produced a non-finite value.
class LawError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative solver did not converge. Carries enough state to diagnose.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double lo, double hi)
      : std::runtime_error(what), bracket_lo(lo), bracket_hi(hi) {}
  SolverError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), residual_history(std::move(history)) {}

  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  std::vector<double> residual_history;
  long node = -1;
};

/// Analysis input cannot support the requested estimate (e.g. all samples
/// below the floor of a log fit).
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Config or CSV text could not be parsed.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

}  // namespace dampwave
