#include <cmath>

#include "dampwave/error.hpp"
#include "dampwave/grid.hpp"
#include "doctest.h"

using namespace dampwave;

TEST_CASE("rectangle interior count") {
  const Grid g = build_grid(DomainSpec::rectangle(1.0, 1.0), 0.25);
  CHECK(g.interior_count() == 9);
  CHECK(g.nx() == 5);
  CHECK(g.ny() == 5);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const Point p = g.node(idx);
    const bool inside = p.x > 1e-12 && p.x < 1.0 - 1e-12 && p.y > 1e-12 && p.y < 1.0 - 1e-12;
    CHECK(g.is_interior(idx) == inside);
    if (!inside) CHECK(g.kind(idx) == NodeKind::boundary);
  }
}

TEST_CASE("disk interior nodes are lattice points strictly inside") {
  const Grid g = build_grid(DomainSpec::disk(1.0), 0.5);
  // enumerate the lattice independently
  int expected = 0;
  for (int i = -4; i <= 4; ++i) {
    for (int j = -4; j <= 4; ++j) {
      const double x = 0.5 * i;
      const double y = 0.5 * j;
      if (x * x + y * y < 1.0) ++expected;
    }
  }
  CHECK(expected == 9);
  CHECK(g.interior_count() == static_cast<std::size_t>(expected));
  for (std::size_t idx : g.interior_nodes()) {
    const Point p = g.node(idx);
    CHECK(p.x * p.x + p.y * p.y < 1.0);
  }
}

TEST_CASE("too coarse or non-dividing spacing is rejected") {
  CHECK_THROWS_AS(build_grid(DomainSpec::rectangle(1.0, 1.0), 0.6), ConfigError);
  CHECK_THROWS_AS(build_grid(DomainSpec::rectangle(1.0, 1.0), 0.3), ConfigError);
  CHECK_THROWS_AS(build_grid(DomainSpec::disk(1.0), 1.0), ConfigError);
  CHECK_THROWS_AS(build_grid(DomainSpec::rectangle(1.0, 1.0), 0.0), ConfigError);
  CHECK_THROWS_AS(DomainSpec::rectangle(-1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(DomainSpec::disk(0.0), ConfigError);
}

TEST_CASE("interior nodes have interior or boundary neighbours") {
  for (const auto& dom : {DomainSpec::rectangle(2.0, 1.0), DomainSpec::disk(1.0)}) {
    const Grid g = build_grid(dom, 1.0 / 20.0);
    CHECK(g.interior_count() > 0);
    for (std::size_t idx : g.interior_nodes()) {
      const std::size_t nx = static_cast<std::size_t>(g.nx());
      for (std::size_t nb : {idx - 1, idx + 1, idx - nx, idx + nx}) {
        CHECK(g.kind(nb) != NodeKind::exterior);
      }
    }
  }
}

TEST_CASE("rectangle boundary segments carry outward normals") {
  const Grid g = build_grid(DomainSpec::rectangle(1.0, 1.0), 0.25);
  REQUIRE(g.boundary().size() == 4);
  const Point centre{0.5, 0.5};
  for (const auto& s : g.boundary()) {
    CHECK(std::abs(std::hypot(s.normal.x, s.normal.y) - 1.0) < 1e-14);
    CHECK(dot(s.midpoint - centre, s.normal) > 0.0);
  }
}

TEST_CASE("disk arcs cover the circle") {
  const Grid g = build_grid(DomainSpec::disk(1.0), 0.1);
  CHECK(g.boundary().size() >= 8);
  for (const auto& s : g.boundary()) {
    CHECK(s.kind == BoundarySegment::Kind::arc);
    CHECK(std::abs(std::hypot(s.midpoint.x, s.midpoint.y) - 1.0) < 1e-12);
    CHECK(s.distance({0.0, 0.0}) == doctest::Approx(1.0));
  }
}

TEST_CASE("apply_dirichlet zeroes boundary values") {
  const Grid g = build_grid(DomainSpec::disk(1.0), 0.1);
  Field f(g.size(), 1.0);
  apply_dirichlet(g, f);
  for (std::size_t idx = 0; idx < g.size(); ++idx) CHECK(f[idx] == (g.is_interior(idx) ? 1.0 : 0.0));
}
