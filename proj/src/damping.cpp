#include "dampwave/damping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dampwave {

std::string to_string(DampingFamily family) {
  switch (family) {
    case DampingFamily::linear:
      return "linear";
    case DampingFamily::saturating:
      return "saturating";
    case DampingFamily::sublinear:
      return "sublinear";
    case DampingFamily::cubic:
      return "cubic";
    case DampingFamily::polynomial:
      return "polynomial";
  }
  return "unknown";
}

DampingLaw DampingLaw::linear(double kappa) {
  if (!(kappa > 0.0)) throw ConfigError("linear damping needs kappa > 0");
  DampingLaw law;
  law.family_ = DampingFamily::linear;
  law.kappa_ = kappa;
  law.q_ = 2.0;
  law.m_ = 1.0;
  law.c_growth_ = kappa;
  return law;
}

DampingLaw DampingLaw::saturating() {
  DampingLaw law;
  law.family_ = DampingFamily::saturating;
  law.q_ = 2.0;
  law.m_ = 1.0;
  law.c_growth_ = 1.0;
  return law;
}

DampingLaw DampingLaw::sublinear() {
  DampingLaw law;
  law.family_ = DampingFamily::sublinear;
  law.q_ = 2.0;
  law.m_ = 1.0;
  law.c_growth_ = 2.0;
  return law;
}

DampingLaw DampingLaw::cubic() {
  DampingLaw law;
  law.family_ = DampingFamily::cubic;
  law.q_ = 3.0;
  law.m_ = 2.0;
  law.c_growth_ = 4.0;  // 1 + 3s^2 <= 4 s^2 and s + s^3 <= 2 s^3 for |s| >= 1
  return law;
}

DampingLaw DampingLaw::polynomial(std::vector<double> coefficients) {
  while (!coefficients.empty() && coefficients.back() == 0.0) coefficients.pop_back();
  if (coefficients.empty()) throw ConfigError("polynomial damping needs a nonzero coefficient");
  DampingLaw law;
  law.family_ = DampingFamily::polynomial;
  const double degree = static_cast<double>(coefficients.size() - 1);
  double sum = 0.0;
  double dsum = 0.0;
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    sum += std::abs(coefficients[k]);
    dsum += static_cast<double>(k) * std::abs(coefficients[k]);
  }
  law.coeffs_ = std::move(coefficients);
  law.q_ = std::max(degree, 2.0);
  law.m_ = std::max(degree - 1.0, 1.0);
  law.c_growth_ = std::max(sum, dsum);
  return law;
}

DampingLaw DampingLaw::with_exponents(double q, double m, double c_growth) const {
  if (!(c_growth > 0.0)) throw ConfigError("growth constant must be positive");
  DampingLaw law = *this;
  law.q_ = q;
  law.m_ = m;
  law.c_growth_ = c_growth;
  return law;
}

std::string DampingLaw::describe() const {
  std::ostringstream os;
  os << to_string(family_);
  if (family_ == DampingFamily::linear) os << "(kappa=" << kappa_ << ")";
  if (family_ == DampingFamily::polynomial) {
    os << "(";
    for (std::size_t k = 0; k < coeffs_.size(); ++k) os << (k ? "," : "") << coeffs_[k];
    os << ")";
  }
  return os.str();
}

namespace {

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

H1Report verify_h1(const DampingLaw& law, double x_min, double x_max, std::size_t n_samples) {
  if (!(x_min <= -1.0 && x_max >= 1.0)) {
    throw std::invalid_argument("H1 sample range must contain [-1, 1]");
  }
  if (n_samples < 100) throw std::invalid_argument("H1 verification needs at least 100 samples");

  H1Report report;
  report.range_min = x_min;
  report.range_max = x_max;
  report.samples = n_samples;

  double worst = -1.0;
  auto violate = [&](bool& clause, const char* name, double x, double magnitude) {
    clause = false;
    if (magnitude > worst) {
      worst = magnitude;
      report.worst_x = x;
      report.worst_clause = name;
    }
  };

  if (law.g(0.0) != 0.0) violate(report.g_zero, "g(0)=0", 0.0, std::abs(law.g(0.0)));
  if (!(law.g_prime(0.0) > 0.0)) {
    violate(report.g_prime_positive, "g'(0)>0", 0.0, std::abs(law.g_prime(0.0)));
  }

  const double q = law.q();
  const double m = law.m();
  const double c = law.c_growth();
  std::vector<double> lx;
  std::vector<double> lg;
  std::vector<double> lxd;
  std::vector<double> lgd;

  const double step = (x_max - x_min) / static_cast<double>(n_samples - 1);
  double previous = 0.0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double x = k + 1 == n_samples ? x_max : x_min + step * static_cast<double>(k);
    const double gx = law.g(x);
    const double gpx = law.g_prime(x);

    if (k > 0 && gx < previous) violate(report.monotone, "monotone", x, previous - gx);
    previous = gx;

    if (x != 0.0 && !(x * gx > 0.0)) violate(report.sign, "sign", x, -x * gx);

    const double ax = std::abs(x);
    if (ax >= 1.0) {
      const double g_cap = c * std::pow(ax, q);
      if (std::abs(gx) > g_cap * (1.0 + 1e-12)) violate(report.growth_g, "growth_g", x, std::abs(gx) - g_cap);
      const double gp_cap = c * std::pow(ax, m);
      if (std::abs(gpx) > gp_cap * (1.0 + 1e-12)) {
        violate(report.growth_g_prime, "growth_g'", x, std::abs(gpx) - gp_cap);
      }
      if (gx != 0.0) {
        lx.push_back(std::log(ax));
        lg.push_back(std::log(std::abs(gx)));
      }
      if (gpx != 0.0) {
        lxd.push_back(std::log(ax));
        lgd.push_back(std::log(std::abs(gpx)));
      }
    }
  }

  report.q_hat = loglog_slope(lx, lg);
  report.m_hat = loglog_slope(lxd, lgd);
  const bool declared_in_range = q > 1.0 && q < 5.0 && m > 0.0 && m < 4.0;
  if (!declared_in_range || !(report.q_hat <= q + 0.1)) {
    report.exponent_ok = false;
    if (report.worst_clause.empty()) report.worst_clause = "exponent";
  }
  return report;
}

double select_p(double m) {
  if (!(m > 0.0 && m < 4.0)) throw ConfigError("growth exponent m must lie in (0, 4)");
  if (m <= 2.0) return 2.0 / m + 1.0;
  return 0.5 * (1.0 + m / (m - 2.0));
}

double solve_pointwise_implicit(const DampingLaw& law, double a, double d, double dt, double rhs) {
  if (!(dt > 0.0)) throw ConfigError("implicit damping solve needs dt > 0");
  const double c = dt * a;
  if (c == 0.0) return rhs;

  const double tol = 1e-12 * std::max(1.0, std::abs(rhs));
  auto residual = [&](double v) { return v + c * law.g(v + d) - rhs; };

  // F(rhs) has the sign of rhs + d and F(-d) the opposite sign.
  double lo = std::min(rhs, -d);
  double hi = std::max(rhs, -d);
  double v = rhs;
  for (int iter = 0; iter < 100; ++iter) {
    const double f = residual(v);
    if (std::abs(f) <= tol) return v;
    if (f < 0.0) {
      lo = v;
    } else {
      hi = v;
    }
    if (std::nextafter(lo, hi) >= hi) {
      return std::abs(residual(lo)) <= std::abs(residual(hi)) ? lo : hi;
    }
    const double slope = 1.0 + c * law.g_prime(v + d);
    double next = v - f / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    v = next;
  }
  throw SolverError("implicit damping solve exceeded 100 iterations", lo, hi);
}

}  // namespace dampwave
