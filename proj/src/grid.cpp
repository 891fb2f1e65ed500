#include "neurowire/grid.hpp"

#include <limits>

#include "neurowire/errors.hpp"

namespace neurowire {

PeriodicGrid::PeriodicGrid(double half_length, double spacing)
    : half_length_(half_length), spacing_(spacing), n_(0) {
  if (!(half_length > 0.0)) throw DomainError("grid: half_length must be positive");
  if (!(spacing > 0.0)) throw DomainError("grid: spacing must be positive");
  const double cells = 2.0 * half_length / spacing;
  const double rounded = std::round(cells);
  if (rounded < 1.0 || std::abs(cells - rounded) > 1e-9 * cells) {
    throw DomainError("grid: spacing must divide 2L evenly");
  }
  n_ = static_cast<std::size_t>(rounded);
  if (n_ < 3) throw DomainError("grid: at least three cells per axis are required");
}

std::size_t PeriodicGrid::node_index(long i, long j) const {
  const long n = static_cast<long>(n_);
  i %= n;
  j %= n;
  if (i < 0) i += n;
  if (j < 0) j += n;
  return static_cast<std::size_t>(j) * n_ + static_cast<std::size_t>(i);
}

Vec2 PeriodicGrid::node_position(std::size_t node) const {
  const std::size_t i = node % n_;
  const std::size_t j = node / n_;
  return {-half_length_ + static_cast<double>(i) * spacing_,
          -half_length_ + static_cast<double>(j) * spacing_};
}

std::array<std::size_t, 3> PeriodicGrid::element_nodes(std::size_t element) const {
  const std::size_t cell = element / 2;
  const long i = static_cast<long>(cell % n_);
  const long j = static_cast<long>(cell / n_);
  if (element % 2 == 0) {
    return {node_index(i, j), node_index(i + 1, j), node_index(i + 1, j + 1)};
  }
  return {node_index(i, j), node_index(i + 1, j + 1), node_index(i, j + 1)};
}

std::array<Vec2, 3> PeriodicGrid::basis_gradients(std::size_t element) const {
  const double h = 1.0 / spacing_;
  if (element % 2 == 0) return {Vec2{-h, 0.0}, Vec2{h, -h}, Vec2{0.0, h}};
  return {Vec2{0.0, -h}, Vec2{h, 0.0}, Vec2{-h, h}};
}

Vec2 PeriodicGrid::wrap(Vec2 p) const {
  const double period = 2.0 * half_length_;
  auto wrap1 = [&](double v) {
    double w = v - period * std::floor((v + half_length_) / period);
    if (w >= half_length_) w -= period;
    if (w < -half_length_) w = -half_length_;
    return w;
  };
  return {wrap1(p.x), wrap1(p.y)};
}

Vec2 PeriodicGrid::minimal_image(Vec2 d) const {
  const double period = 2.0 * half_length_;
  auto fold = [&](double v) { return v - period * std::round(v / period); };
  return {fold(d.x), fold(d.y)};
}

namespace {

// Barycentric weights of local coordinates (ξ, η) in the lower (kind 0) or
// upper (kind 1) triangle of a cell. Returns false when outside.
bool local_weights(int kind, double xi, double eta, std::array<double, 3>& w) {
  if (kind == 0) {
    if (!(eta >= 0.0 && eta <= xi && xi <= 1.0)) return false;
    w = {1.0 - xi, xi - eta, eta};
  } else {
    if (!(xi >= 0.0 && xi <= eta && eta <= 1.0)) return false;
    w = {1.0 - eta, xi, eta - xi};
  }
  return true;
}

}  // namespace

ElementLocation PeriodicGrid::locate(Vec2 p) const {
  const Vec2 q = wrap(p);
  const double u = (q.x + half_length_) / spacing_;
  const double v = (q.y + half_length_) / spacing_;
  long i = static_cast<long>(std::floor(u));
  long j = static_cast<long>(std::floor(v));
  const long n = static_cast<long>(n_);
  double xi = u - static_cast<double>(i);
  double eta = v - static_cast<double>(j);
  if (i >= n) { i = n - 1; xi = 1.0; }
  if (j >= n) { j = n - 1; eta = 1.0; }

  ElementLocation best;
  best.element = std::numeric_limits<std::size_t>::max();
  auto consider = [&](long ci, long cj, double lx, double ly) {
    const std::size_t cell = node_index(ci, cj);
    for (int kind = 0; kind < 2; ++kind) {
      std::array<double, 3> w{};
      const std::size_t e = 2 * cell + static_cast<std::size_t>(kind);
      if (e < best.element && local_weights(kind, lx, ly, w)) {
        best.element = e;
        best.weights = w;
      }
    }
  };
  consider(i, j, xi, eta);
  if (xi == 0.0) consider(i - 1, j, 1.0, eta);
  if (eta == 0.0) consider(i, j - 1, xi, 1.0);
  if (xi == 0.0 && eta == 0.0) consider(i - 1, j - 1, 1.0, 1.0);
  best.nodes = element_nodes(best.element);
  return best;
}

}  // namespace neurowire
