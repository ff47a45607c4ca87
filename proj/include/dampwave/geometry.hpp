#pragma once

#include <cstddef>
#include <vector>

#include "dampwave/grid.hpp"

namespace dampwave {

/// Boundary part illuminated from an observation point:
/// segments whose midpoint satisfies (x - x0).nu >= 0.
struct GammaRegion {
  Point x0;
  std::vector<BoundarySegment> segments;

  bool empty() const { return segments.empty(); }
  double distance(Point p) const;
};

GammaRegion gamma_region(const Grid& grid, Point x0);

/// Euclidean distance of every grid node to the nearest point of gamma.
Field distance_to_gamma(const Grid& grid, const GammaRegion& gamma);

/// Nodes (all kinds) within eps of gamma.
NodeMask epsilon_neighborhood(const Grid& grid, const GammaRegion& gamma, double eps);
NodeMask epsilon_neighborhood(const Field& distance, double eps);

struct MgcCheck {
  bool satisfied = true;
  std::vector<std::size_t> violations;  ///< interior nodes in N_eps but not in omega
};

/// Multiplier geometric condition: omega contains N_eps(gamma) on the
/// interior nodes.
MgcCheck check_mgc(const NodeMask& omega, const GammaRegion& gamma, double eps, const Grid& grid);

/// Damping region together with the construction that produced it.
struct MgcRegion {
  GammaRegion gamma;
  double eps = 0.0;
  NodeMask omega;
};

/// Quintic smoothstep 6r^5 - 15r^4 + 10r^3 on [0,1], clamped outside.
inline double smoothstep(double r) {
  if (r <= 0.0) return 0.0;
  if (r >= 1.0) return 1.0;
  return r * r * r * (r * (6.0 * r - 15.0) + 10.0);
}

enum class LocalizationProfile { constant, smooth };

struct LocalizationField {
  Field a;
  double a0 = 0.0;
  LocalizationProfile profile = LocalizationProfile::constant;
  double band = 0.0;  ///< transition width of the smooth profile

  /// Node-to-node Lipschitz constant implied by the profile.
  double lipschitz_bound() const;
};

/// a = a0 on omega. The smooth profile ramps from a0 down to 0 over `band`
/// (distance from the nearest omega node) with the smoothstep.
LocalizationField build_localization(const NodeMask& omega, double a0, LocalizationProfile profile,
                                     const Grid& grid, double band = 0.0);

struct CutoffRadii {
  double eps0 = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  double eps = 0.0;

  /// eps/4, eps/2, 3eps/4.
  static CutoffRadii defaults(double eps);
  void validate() const;
};

/// Smooth cutoffs around gamma. psi vanishes near gamma and is 1 away from
/// it; xi is 1 on Q1 and 0 outside Q2; beta is 1 on Q2 and 0 beyond eps.
/// h = psi (x - x0) is stored componentwise.
struct CutoffFields {
  CutoffRadii radii;
  Point x0;
  Field distance;
  Field psi;
  Field xi;
  Field beta;
  Field hx;
  Field hy;

  NodeMask q_mask(double radius) const { return epsilon_neighborhood(distance, radius); }
};

CutoffFields build_cutoffs(const Grid& grid, const GammaRegion& gamma, const CutoffRadii& radii);

}  // namespace dampwave
