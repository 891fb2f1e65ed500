#include "neurowire/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "neurowire/errors.hpp"

namespace neurowire {

void QuadratureSpec::validate() const {
  if (space_points < 2 || time_points < 2) {
    throw InputError("quadrature: point counts must be >= 2");
  }
  if (!(space_halfwidth > 0.0)) {
    throw InputError("quadrature: space_halfwidth must be positive");
  }
}

namespace {

Rule compute_gauss_legendre(std::size_t n) {
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const Rule& gauss_legendre(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, Rule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    if (n == 0) throw InputError("gauss_legendre: need at least one node");
    it = cache.emplace(n, compute_gauss_legendre(n)).first;
  }
  return it->second;
}

Rule midpoint_rule(std::size_t n) {
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.assign(n, 2.0 / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = -1.0 + (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
  }
  return rule;
}

Rule make_rule(QuadratureScheme scheme, std::size_t n) {
  return scheme == QuadratureScheme::GaussLegendre ? gauss_legendre(n) : midpoint_rule(n);
}

std::vector<double> graded_edges(double length, double first, double ratio, double cap) {
  std::vector<double> edges{0.0};
  if (!(length > 0.0)) return edges;
  double width = std::min(first, length);
  double pos = 0.0;
  while (pos < length) {
    double next = pos + width;
    // Avoid a sliver at the end.
    if (next > length || length - next < 0.25 * width) next = length;
    edges.push_back(next);
    pos = next;
    width = std::min(width * ratio, cap);
  }
  return edges;
}

}  // namespace neurowire
