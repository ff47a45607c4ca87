#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dampwave/error.hpp"

namespace dampwave {

enum class DampingFamily { linear, saturating, sublinear, cubic, polynomial };

std::string to_string(DampingFamily family);

/// Monotone scalar nonlinearity g with its analytic derivative and the
/// declared growth exponents: |g(x)| <= C|x|^q and |g'(x)| <= C|x|^m for
/// |x| >= 1.
class DampingLaw {
 public:
  static DampingLaw linear(double kappa);
  /// s / (1 + |s|)
  static DampingLaw saturating();
  /// s for |s| <= 1, sign(s)(2 sqrt|s| - 1) beyond
  static DampingLaw sublinear();
  /// s + s^3
  static DampingLaw cubic();
  /// sum_k c_k s^k. Exponents default to q = max(degree, 2), m = max(degree - 1, 1).
  static DampingLaw polynomial(std::vector<double> coefficients);

  DampingLaw with_exponents(double q, double m, double c_growth) const;

  DampingFamily family() const { return family_; }
  double q() const { return q_; }
  double m() const { return m_; }
  double c_growth() const { return c_growth_; }
  double kappa() const { return kappa_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  std::string describe() const;

  double g(double s) const {
    const double value = raw_g(s);
    if (!std::isfinite(value)) throw LawError("damping law returned a non-finite value");
    return value;
  }
  double g_prime(double s) const {
    const double value = raw_g_prime(s);
    if (!std::isfinite(value)) throw LawError("damping law derivative is non-finite");
    return value;
  }

 private:
  double raw_g(double s) const {
    switch (family_) {
      case DampingFamily::linear:
        return kappa_ * s;
      case DampingFamily::saturating:
        return s / (1.0 + std::abs(s));
      case DampingFamily::sublinear:
        return std::abs(s) <= 1.0 ? s : std::copysign(2.0 * std::sqrt(std::abs(s)) - 1.0, s);
      case DampingFamily::cubic:
        return s + s * s * s;
      case DampingFamily::polynomial: {
        double acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
        return acc;
      }
    }
    return 0.0;
  }
  double raw_g_prime(double s) const {
    switch (family_) {
      case DampingFamily::linear:
        return kappa_;
      case DampingFamily::saturating: {
        const double t = 1.0 + std::abs(s);
        return 1.0 / (t * t);
      }
      case DampingFamily::sublinear:
        return std::abs(s) <= 1.0 ? 1.0 : 1.0 / std::sqrt(std::abs(s));
      case DampingFamily::cubic:
        return 1.0 + 3.0 * s * s;
      case DampingFamily::polynomial: {
        double acc = 0.0;
        for (std::size_t k = coeffs_.size(); k-- > 1;) acc = acc * s + static_cast<double>(k) * coeffs_[k];
        return acc;
      }
    }
    return 0.0;
  }

  DampingFamily family_ = DampingFamily::linear;
  double kappa_ = 1.0;
  std::vector<double> coeffs_;
  double q_ = 2.0;
  double m_ = 1.0;
  double c_growth_ = 1.0;
};

inline double eval_g(const DampingLaw& law, double x) { return law.g(x); }
inline double eval_g_prime(const DampingLaw& law, double x) { return law.g_prime(x); }

struct H1Report {
  bool g_zero = true;            ///< g(0) == 0
  bool g_prime_positive = true;  ///< g'(0) > 0
  bool monotone = true;
  bool sign = true;              ///< x g(x) > 0 for x != 0
  bool growth_g = true;
  bool growth_g_prime = true;
  bool exponent_ok = true;  ///< q_hat <= q + 0.1
  double q_hat = 0.0;
  double m_hat = 0.0;
  double range_min = 0.0;
  double range_max = 0.0;
  std::size_t samples = 0;
  std::optional<double> worst_x;  ///< sample with the largest clause violation
  std::string worst_clause;

  bool passed() const {
    return g_zero && g_prime_positive && monotone && sign && growth_g && growth_g_prime && exponent_ok;
  }
};

/// Samples H1 on [x_min, x_max]. The range must contain [-1, 1] and
/// n_samples >= 100; violations are reported, never thrown.
H1Report verify_h1(const DampingLaw& law, double x_min, double x_max, std::size_t n_samples);

/// Exponent of the d_t budget: 2/m + 1 for m <= 2, midpoint of (1, m/(m-2))
/// for 2 < m < 4.
double select_p(double m);

/// Root of v + dt*a*g(v + d) - rhs = 0 to |F| <= 1e-12 max(1, |rhs|).
/// Safeguarded Newton inside the bracket [min(rhs,-d), max(rhs,-d)].
double solve_pointwise_implicit(const DampingLaw& law, double a, double d, double dt, double rhs);

}  // namespace dampwave
