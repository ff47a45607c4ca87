#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dampwave {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

/// Rectangle [0,width]x[0,height] (corner at the origin) or a disk centred
/// at the origin.
struct DomainSpec {
  enum class Shape { rectangle, disk };

  Shape shape = Shape::rectangle;
  double width = 1.0;
  double height = 1.0;
  double radius = 1.0;

  static DomainSpec rectangle(double width, double height);
  static DomainSpec disk(double radius);
};

enum class NodeKind : std::uint8_t { interior, boundary, exterior };

/// Scalar field sampled on every lattice node of a Grid (row-major, x fastest).
using Field = std::vector<double>;
/// Per-node 0/1 indicator.
using NodeMask = std::vector<std::uint8_t>;

/// Piece of the boundary: a straight side of a rectangle or a short arc of
/// the circle. Normal is the outward unit normal at the midpoint.
struct BoundarySegment {
  enum class Kind { line, arc };

  Kind kind = Kind::line;
  std::string label;
  Point a;
  Point b;
  Point midpoint;
  Point normal;
  // arc only
  Point center;
  double radius = 0.0;
  double theta0 = 0.0;
  double theta1 = 0.0;

  double distance(Point p) const;
};

/// Uniform Cartesian lattice covering the domain. Interior nodes carry
/// unknowns; boundary nodes are Dirichlet (value 0); exterior nodes are
/// outside the stencil support.
class Grid {
 public:
  Grid() = default;

  const DomainSpec& domain() const { return domain_; }
  double spacing() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return kind_.size(); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i);
  }
  Point node(std::size_t idx) const {
    const int i = static_cast<int>(idx % static_cast<std::size_t>(nx_));
    const int j = static_cast<int>(idx / static_cast<std::size_t>(nx_));
    return {x_min_ + i * h_, y_min_ + j * h_};
  }
  Point node(int i, int j) const { return {x_min_ + i * h_, y_min_ + j * h_}; }
  NodeKind kind(std::size_t idx) const { return kind_[idx]; }
  bool is_interior(std::size_t idx) const { return kind_[idx] == NodeKind::interior; }
  const std::vector<NodeKind>& kinds() const { return kind_; }
  const std::vector<std::size_t>& interior_nodes() const { return interior_; }
  std::size_t interior_count() const { return interior_.size(); }
  const std::vector<BoundarySegment>& boundary() const { return boundary_; }
  /// Bounding box of the continuous domain.
  Point lower() const { return lower_; }
  Point upper() const { return upper_; }

  Field zeros() const { return Field(size(), 0.0); }

  friend Grid build_grid(const DomainSpec& domain, double spacing);

 private:
  DomainSpec domain_;
  double h_ = 0.0;
  int nx_ = 0;
  int ny_ = 0;
  double x_min_ = 0.0;
  double y_min_ = 0.0;
  Point lower_;
  Point upper_;
  std::vector<NodeKind> kind_;
  std::vector<std::size_t> interior_;
  std::vector<BoundarySegment> boundary_;
};

/// Classifies nodes and builds the boundary-segment table. Rectangles need a
/// spacing that divides both sides; disks are masked (interior iff strictly
/// inside). Throws ConfigError when fewer than 3 interior nodes per axis.
Grid build_grid(const DomainSpec& domain, double spacing);

/// Zero every non-interior entry.
void apply_dirichlet(const Grid& grid, Field& f);

}  // namespace dampwave
