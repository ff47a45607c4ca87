#include "dampwave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dampwave/error.hpp"

namespace dampwave {

DomainSpec DomainSpec::rectangle(double width, double height) {
  if (!(width > 0.0) || !(height > 0.0)) {
    throw ConfigError("rectangle sides must be positive");
  }
  DomainSpec d;
  d.shape = Shape::rectangle;
  d.width = width;
  d.height = height;
  return d;
}

DomainSpec DomainSpec::disk(double radius) {
  if (!(radius > 0.0)) throw ConfigError("disk radius must be positive");
  DomainSpec d;
  d.shape = Shape::disk;
  d.radius = radius;
  return d;
}

namespace {

double point_segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  double s = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  const Point q = a + s * ab;
  return std::hypot(p.x - q.x, p.y - q.y);
}

BoundarySegment make_side(std::string label, Point a, Point b, Point normal) {
  BoundarySegment s;
  s.kind = BoundarySegment::Kind::line;
  s.label = std::move(label);
  s.a = a;
  s.b = b;
  s.midpoint = 0.5 * (a + b);
  s.normal = normal;
  return s;
}

}  // namespace

double BoundarySegment::distance(Point p) const {
  if (kind == Kind::line) return point_segment_distance(p, a, b);

  const Point rel = p - center;
  const double r = std::hypot(rel.x, rel.y);
  if (r == 0.0) return radius;
  double theta = std::atan2(rel.y, rel.x);
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  if (theta >= theta0 && theta <= theta1) return std::abs(r - radius);
  return std::min(std::hypot(p.x - a.x, p.y - a.y), std::hypot(p.x - b.x, p.y - b.y));
}

Grid build_grid(const DomainSpec& domain, double spacing) {
  if (!(spacing > 0.0)) throw ConfigError("grid spacing must be positive");

  Grid g;
  g.domain_ = domain;
  g.h_ = spacing;

  if (domain.shape == DomainSpec::Shape::rectangle) {
    const double fx = domain.width / spacing;
    const double fy = domain.height / spacing;
    const long cx = std::lround(fx);
    const long cy = std::lround(fy);
    if (cx - 1 < 3 || cy - 1 < 3) {
      throw ConfigError("grid spacing too coarse: fewer than 3 interior nodes per axis");
    }
    if (std::abs(fx - static_cast<double>(cx)) > 1e-9 * fx ||
        std::abs(fy - static_cast<double>(cy)) > 1e-9 * fy) {
      throw ConfigError("grid spacing must divide the rectangle sides");
    }
    g.nx_ = static_cast<int>(cx) + 1;
    g.ny_ = static_cast<int>(cy) + 1;
    g.x_min_ = 0.0;
    g.y_min_ = 0.0;
    g.lower_ = {0.0, 0.0};
    g.upper_ = {domain.width, domain.height};
    g.kind_.assign(static_cast<std::size_t>(g.nx_) * g.ny_, NodeKind::boundary);
    for (int j = 1; j < g.ny_ - 1; ++j) {
      for (int i = 1; i < g.nx_ - 1; ++i) g.kind_[g.index(i, j)] = NodeKind::interior;
    }
    const double w = domain.width;
    const double h = domain.height;
    g.boundary_ = {
        make_side("bottom", {0.0, 0.0}, {w, 0.0}, {0.0, -1.0}),
        make_side("right", {w, 0.0}, {w, h}, {1.0, 0.0}),
        make_side("top", {w, h}, {0.0, h}, {0.0, 1.0}),
        make_side("left", {0.0, h}, {0.0, 0.0}, {-1.0, 0.0}),
    };
  } else {
    const double radius = domain.radius;
    const int n = static_cast<int>(std::ceil(radius / spacing)) + 1;
    g.nx_ = 2 * n + 1;
    g.ny_ = 2 * n + 1;
    g.x_min_ = -n * spacing;
    g.y_min_ = -n * spacing;
    g.lower_ = {-radius, -radius};
    g.upper_ = {radius, radius};
    g.kind_.assign(static_cast<std::size_t>(g.nx_) * g.ny_, NodeKind::exterior);
    const double r2 = radius * radius;
    for (int j = 0; j < g.ny_; ++j) {
      for (int i = 0; i < g.nx_; ++i) {
        const Point p = g.node(i, j);
        if (p.x * p.x + p.y * p.y < r2) g.kind_[g.index(i, j)] = NodeKind::interior;
      }
    }
    // Dirichlet ring: non-interior nodes touching an interior node.
    for (int j = 0; j < g.ny_; ++j) {
      for (int i = 0; i < g.nx_; ++i) {
        const std::size_t idx = g.index(i, j);
        if (g.kind_[idx] == NodeKind::interior) continue;
        const bool touches = (i > 0 && g.kind_[g.index(i - 1, j)] == NodeKind::interior) ||
                             (i + 1 < g.nx_ && g.kind_[g.index(i + 1, j)] == NodeKind::interior) ||
                             (j > 0 && g.kind_[g.index(i, j - 1)] == NodeKind::interior) ||
                             (j + 1 < g.ny_ && g.kind_[g.index(i, j + 1)] == NodeKind::interior);
        if (touches) g.kind_[idx] = NodeKind::boundary;
      }
    }
    int central_row = 0;
    for (int i = 0; i < g.nx_; ++i) {
      if (g.kind_[g.index(i, n)] == NodeKind::interior) ++central_row;
    }
    if (central_row < 3) {
      throw ConfigError("grid spacing too coarse: fewer than 3 interior nodes per axis");
    }

    const double two_pi = 2.0 * std::numbers::pi;
    const int arcs = std::max(8, static_cast<int>(std::ceil(two_pi * radius / spacing)));
    g.boundary_.reserve(static_cast<std::size_t>(arcs));
    for (int k = 0; k < arcs; ++k) {
      BoundarySegment s;
      s.kind = BoundarySegment::Kind::arc;
      s.label = "arc" + std::to_string(k);
      s.center = {0.0, 0.0};
      s.radius = radius;
      s.theta0 = two_pi * k / arcs;
      s.theta1 = two_pi * (k + 1) / arcs;
      const double mid = 0.5 * (s.theta0 + s.theta1);
      s.a = {radius * std::cos(s.theta0), radius * std::sin(s.theta0)};
      s.b = {radius * std::cos(s.theta1), radius * std::sin(s.theta1)};
      s.normal = {std::cos(mid), std::sin(mid)};
      s.midpoint = radius * s.normal;
      g.boundary_.push_back(std::move(s));
    }
  }

  for (std::size_t idx = 0; idx < g.kind_.size(); ++idx) {
    if (g.kind_[idx] == NodeKind::interior) g.interior_.push_back(idx);
  }
  return g;
}

void apply_dirichlet(const Grid& grid, Field& f) {
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    if (!grid.is_interior(idx)) f[idx] = 0.0;
  }
}

}  // namespace dampwave
