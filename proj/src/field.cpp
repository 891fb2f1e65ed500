#include "neurowire/field.hpp"

#include "neurowire/errors.hpp"

namespace neurowire {

FieldState FieldState::zeros(std::size_t species, std::size_t nodes) {
  FieldState s;
  s.coefficients.assign(species, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nodes)));
  return s;
}

void eval_field_and_gradient(const FieldState& state, const PeriodicGrid& grid, Vec2 x,
                             std::vector<double>& values, std::vector<Vec2>& gradients) {
  const auto loc = grid.locate(x);
  const auto g = grid.basis_gradients(loc.element);
  const std::size_t n = state.species_count();
  values.assign(n, 0.0);
  gradients.assign(n, Vec2{});
  for (std::size_t i = 0; i < n; ++i) {
    const auto& q = state.coefficients[i];
    if (static_cast<std::size_t>(q.size()) != grid.node_count()) {
      throw InputError("field: coefficient vector length does not match the grid");
    }
    for (int a = 0; a < 3; ++a) {
      const double qa = q[static_cast<Eigen::Index>(loc.nodes[a])];
      values[i] += qa * loc.weights[a];
      gradients[i] += qa * g[a];
    }
  }
}

std::vector<double> eval_field(const FieldState& state, const PeriodicGrid& grid, Vec2 x) {
  std::vector<double> values;
  std::vector<Vec2> gradients;
  eval_field_and_gradient(state, grid, x, values, gradients);
  return values;
}

std::vector<Vec2> eval_field_gradient(const FieldState& state, const PeriodicGrid& grid, Vec2 x) {
  std::vector<double> values;
  std::vector<Vec2> gradients;
  eval_field_and_gradient(state, grid, x, values, gradients);
  return gradients;
}

}  // namespace neurowire
