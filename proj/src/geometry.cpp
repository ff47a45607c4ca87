#include "dampwave/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dampwave/error.hpp"

namespace dampwave {

namespace {
// Absorbs rounding in node coordinates (i*h) when comparing distances.
constexpr double kDistanceSlack = 1e-12;
}  // namespace

double GammaRegion::distance(Point p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : segments) best = std::min(best, s.distance(p));
  return best;
}

GammaRegion gamma_region(const Grid& grid, Point x0) {
  GammaRegion gamma;
  gamma.x0 = x0;
  for (const auto& s : grid.boundary()) {
    if (dot(s.midpoint - x0, s.normal) >= 0.0) gamma.segments.push_back(s);
  }
  return gamma;
}

Field distance_to_gamma(const Grid& grid, const GammaRegion& gamma) {
  Field dist(grid.size());
  for (std::size_t idx = 0; idx < grid.size(); ++idx) dist[idx] = gamma.distance(grid.node(idx));
  return dist;
}

NodeMask epsilon_neighborhood(const Field& distance, double eps) {
  NodeMask mask(distance.size(), 0);
  const double limit = eps + kDistanceSlack * std::max(1.0, eps);
  for (std::size_t idx = 0; idx < distance.size(); ++idx) mask[idx] = distance[idx] <= limit ? 1 : 0;
  return mask;
}

NodeMask epsilon_neighborhood(const Grid& grid, const GammaRegion& gamma, double eps) {
  return epsilon_neighborhood(distance_to_gamma(grid, gamma), eps);
}

MgcCheck check_mgc(const NodeMask& omega, const GammaRegion& gamma, double eps, const Grid& grid) {
  const NodeMask neighborhood = epsilon_neighborhood(grid, gamma, eps);
  MgcCheck result;
  for (std::size_t idx : grid.interior_nodes()) {
    if (neighborhood[idx] && !omega[idx]) result.violations.push_back(idx);
  }
  result.satisfied = result.violations.empty();
  return result;
}

double LocalizationField::lipschitz_bound() const {
  if (profile == LocalizationProfile::constant || band <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return a0 * 1.875 / band;  // max slope of the quintic smoothstep is 15/8
}

LocalizationField build_localization(const NodeMask& omega, double a0, LocalizationProfile profile,
                                     const Grid& grid, double band) {
  if (!(a0 > 0.0)) throw ConfigError("localization floor a0 must be positive");
  if (omega.size() != grid.size()) throw ConfigError("omega mask does not match the grid");

  LocalizationField loc;
  loc.a0 = a0;
  loc.profile = profile;
  loc.band = band;
  loc.a = grid.zeros();

  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (omega[idx]) loc.a[idx] = a0;
  }
  if (profile == LocalizationProfile::constant) return loc;

  if (!(band > 0.0)) throw ConfigError("smooth localization needs a positive transition band");
  const double h = grid.spacing();
  const int reach = static_cast<int>(std::ceil(band / h));
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const std::size_t idx = grid.index(i, j);
      if (omega[idx] || grid.kind(idx) == NodeKind::exterior) continue;
      double best = std::numeric_limits<double>::infinity();
      for (int dj = -reach; dj <= reach; ++dj) {
        const int jj = j + dj;
        if (jj < 0 || jj >= grid.ny()) continue;
        for (int di = -reach; di <= reach; ++di) {
          const int ii = i + di;
          if (ii < 0 || ii >= grid.nx() || !omega[grid.index(ii, jj)]) continue;
          best = std::min(best, h * std::hypot(static_cast<double>(di), static_cast<double>(dj)));
        }
      }
      if (best < band) loc.a[idx] = a0 * smoothstep(1.0 - best / band);
    }
  }
  return loc;
}

CutoffRadii CutoffRadii::defaults(double eps) {
  return {0.25 * eps, 0.5 * eps, 0.75 * eps, eps};
}

void CutoffRadii::validate() const {
  if (!(eps0 > 0.0 && eps0 < eps1 && eps1 < eps2 && eps2 < eps)) {
    throw ConfigError("cutoff radii must satisfy 0 < eps0 < eps1 < eps2 < eps");
  }
}

CutoffFields build_cutoffs(const Grid& grid, const GammaRegion& gamma, const CutoffRadii& radii) {
  radii.validate();
  CutoffFields c;
  c.radii = radii;
  c.x0 = gamma.x0;
  c.distance = distance_to_gamma(grid, gamma);
  const std::size_t n = grid.size();
  c.psi.resize(n);
  c.xi.resize(n);
  c.beta.resize(n);
  c.hx.resize(n);
  c.hy.resize(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const double d = c.distance[idx];
    c.psi[idx] = smoothstep((d - radii.eps0) / (radii.eps1 - radii.eps0));
    c.xi[idx] = 1.0 - smoothstep((d - radii.eps1) / (radii.eps2 - radii.eps1));
    c.beta[idx] = 1.0 - smoothstep((d - radii.eps2) / (radii.eps - radii.eps2));
    const Point rel = grid.node(idx) - gamma.x0;
    c.hx[idx] = c.psi[idx] * rel.x;
    c.hy[idx] = c.psi[idx] * rel.y;
  }
  return c;
}

}  // namespace dampwave
