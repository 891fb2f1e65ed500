#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace neurowire {

enum class QuadratureScheme { Midpoint, GaussLegendre };

/// Resolution knobs shared by the analytic oracles.
struct QuadratureSpec {
  double space_halfwidth = 8.0;
  std::size_t space_points = 64;
  std::size_t time_points = 8;
  QuadratureScheme scheme = QuadratureScheme::GaussLegendre;

  /// Throws InputError when a count is below 2 or the halfwidth is not positive.
  void validate() const;
};

/// Nodes and weights of a rule on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with `n` nodes; cached per n, thread-safe.
const Rule& gauss_legendre(std::size_t n);

/// Composite midpoint rule with `n` cells mapped to [-1, 1].
Rule midpoint_rule(std::size_t n);

/// Rule of the requested scheme with `n` nodes on [-1, 1].
Rule make_rule(QuadratureScheme scheme, std::size_t n);

/// Integrate f over [a, b] with `panels` equal sub-intervals, each using `rule`.
template <class F>
double integrate_composite(F&& f, double a, double b, std::size_t panels, const Rule& rule) {
  const double width = (b - a) / static_cast<double>(panels);
  double sum = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * width;
    const double half = 0.5 * width;
    double panel = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      panel += rule.weights[k] * f(mid + half * rule.nodes[k]);
    }
    sum += half * panel;
  }
  return sum;
}

/// Geometrically graded panel edges on [0, length]: the finest panel touches 0
/// with width `first`, widths grow by at most `ratio` and never exceed `cap`.
std::vector<double> graded_edges(double length, double first, double ratio, double cap);

}  // namespace neurowire
