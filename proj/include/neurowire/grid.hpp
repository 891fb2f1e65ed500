#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace neurowire {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  friend Vec2 operator+(Vec2 a, Vec2 b) { return a += b; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return a -= b; }
  friend Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
  double norm() const { return std::hypot(x, y); }
};

/// Element of the uniform periodic triangulation together with the
/// barycentric coordinates of a point inside it.
struct ElementLocation {
  std::size_t element = 0;
  std::array<std::size_t, 3> nodes{};
  std::array<double, 3> weights{};
};

/// Uniform triangulation of the torus (-L, L)² with two triangles per cell.
/// Node (i, j) sits at (-L + iΔx, -L + jΔx) and has index j·n + i. Cell
/// (i, j) holds element 2(j·n + i), the lower triangle (i,j),(i+1,j),(i+1,j+1),
/// and element 2(j·n + i) + 1, the upper triangle (i,j),(i+1,j+1),(i,j+1).
class PeriodicGrid {
 public:
  /// Throws DomainError unless L > 0, Δx > 0 and 2L/Δx is a positive integer.
  PeriodicGrid(double half_length, double spacing);

  double half_length() const { return half_length_; }
  double period() const { return 2.0 * half_length_; }
  double spacing() const { return spacing_; }
  std::size_t cells_per_axis() const { return n_; }
  std::size_t node_count() const { return n_ * n_; }
  std::size_t element_count() const { return 2 * n_ * n_; }
  double element_area() const { return 0.5 * spacing_ * spacing_; }

  std::size_t node_index(long i, long j) const;
  Vec2 node_position(std::size_t node) const;
  std::array<std::size_t, 3> element_nodes(std::size_t element) const;

  /// Gradients of the three local basis functions (vertex order of element_nodes).
  std::array<Vec2, 3> basis_gradients(std::size_t element) const;

  /// Maps a point into [-L, L)².
  Vec2 wrap(Vec2 p) const;
  /// Shortest periodic representative of a displacement.
  Vec2 minimal_image(Vec2 d) const;
  double periodic_distance(Vec2 a, Vec2 b) const { return minimal_image(a - b).norm(); }

  /// Element containing `p` (after wrapping). Points on shared edges or
  /// vertices resolve to the smallest containing element index.
  ElementLocation locate(Vec2 p) const;

 private:
  double half_length_;
  double spacing_;
  std::size_t n_;
};

}  // namespace neurowire
