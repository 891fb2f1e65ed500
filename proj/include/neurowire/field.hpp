#pragma once

#include <Eigen/Dense>
#include <vector>

#include "neurowire/grid.hpp"

namespace neurowire {

/// Galerkin coefficients q_i of every species; c_i = Σ_k q_ik v_k.
struct FieldState {
  std::vector<Eigen::VectorXd> coefficients;
  double time = 0.0;

  static FieldState zeros(std::size_t species, std::size_t nodes);
  std::size_t species_count() const { return coefficients.size(); }
};

/// Concentrations c_i(x) of all species.
std::vector<double> eval_field(const FieldState& state, const PeriodicGrid& grid, Vec2 x);

/// ∇c_i(x), constant on each element (see PeriodicGrid::locate for ties).
std::vector<Vec2> eval_field_gradient(const FieldState& state, const PeriodicGrid& grid, Vec2 x);

/// Both at once, sharing the element search.
void eval_field_and_gradient(const FieldState& state, const PeriodicGrid& grid, Vec2 x,
                             std::vector<double>& values, std::vector<Vec2>& gradients);

/// Nodal interpolant of a function of position.
template <class F>
Eigen::VectorXd interpolate(const PeriodicGrid& grid, F&& f) {
  Eigen::VectorXd q(static_cast<Eigen::Index>(grid.node_count()));
  for (std::size_t k = 0; k < grid.node_count(); ++k) q[static_cast<Eigen::Index>(k)] = f(grid.node_position(k));
  return q;
}

}  // namespace neurowire
