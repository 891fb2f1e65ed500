#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "neurowire/fem.hpp"
#include "neurowire/field.hpp"
#include "neurowire/time_stepper.hpp"

using namespace neurowire;

namespace {

struct System {
  PeriodicGrid grid;
  SparseMatrix mass;
  SparseMatrix stiffness;
};

System make_system(double L, double h, double D, double lambda, DecayPolicy policy = DecayPolicy::RequirePositive) {
  PeriodicGrid g(L, h);
  return {g, assemble_mass(g), assemble_stiffness(g, D, lambda, policy)};
}

Eigen::VectorXd bump(const PeriodicGrid& g, Vec2 centre) {
  return interpolate(g, [&](Vec2 p) {
    const Vec2 d = g.minimal_image(p - centre);
    return std::exp(-4.0 * (d.x * d.x + d.y * d.y));
  });
}

}  // namespace

TEST(ImplicitEuler, ConstantModeDecays) {
  for (auto backend : {SolverBackend::Circulant, SolverBackend::SparseCholesky}) {
    auto s = make_system(1.0, 0.1, 1.0, 2.0);
    const ImplicitEulerStepper stepper(s.grid, s.mass, s.stiffness, 0.01, backend);
    const Eigen::VectorXd q = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(s.grid.node_count()), 3.0);
    const Eigen::VectorXd next = stepper.step(q, Eigen::VectorXd::Zero(q.size()));
    EXPECT_LT((next.array() - 3.0 / (1.0 + 0.01 * 2.0)).abs().maxCoeff(), 1e-12);
    EXPECT_LT(stepper.last_relative_residual(), 1e-10);
  }
}

TEST(ImplicitEuler, BackendsAgree) {
  auto s = make_system(1.0, 0.05, 0.7, 1.3);
  const ImplicitEulerStepper fft(s.grid, s.mass, s.stiffness, 0.002, SolverBackend::Circulant);
  const ImplicitEulerStepper ldlt(s.grid, s.mass, s.stiffness, 0.002, SolverBackend::SparseCholesky);
  const SourceAssembler src(s.grid, Mollifier{0.01});
  const Eigen::VectorXd f = src.unit_load({0.2, -0.3});
  Eigen::VectorXd a = bump(s.grid, {0.0, 0.0});
  Eigen::VectorXd b = a;
  for (int k = 0; k < 20; ++k) {
    a = fft.step(a, f);
    b = ldlt.step(b, f);
  }
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-11 * a.cwiseAbs().maxCoeff());
}

TEST(ImplicitEuler, MassNormNonincreasing) {
  auto s = make_system(1.0, 0.05, 1.0, 0.5);
  const ImplicitEulerStepper stepper(s.grid, s.mass, s.stiffness, 0.01);
  Eigen::VectorXd q = bump(s.grid, {0.3, 0.1});
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(q.size());
  double prev = mass_norm(s.mass, q);
  for (int k = 0; k < 50; ++k) {
    q = stepper.step(q, zero);
    const double now = mass_norm(s.mass, q);
    EXPECT_LE(now, prev);
    prev = now;
  }
}

TEST(ImplicitEuler, MassConservedWithoutDecay) {
  auto s = make_system(1.0, 0.05, 1.0, 0.0, DecayPolicy::AllowZero);
  const ImplicitEulerStepper stepper(s.grid, s.mass, s.stiffness, 0.005);
  Eigen::VectorXd q = bump(s.grid, {0.3, 0.1});
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(q.size());
  const double m0 = one.dot(s.mass * q);
  for (int k = 0; k < 200; ++k) {
    q = stepper.step(q, Eigen::VectorXd::Zero(q.size()));
    EXPECT_NEAR(one.dot(s.mass * q), m0, 1e-12 * m0);
  }
}

TEST(ImplicitEuler, NonnegativeUnderNonnegativeData) {
  auto s = make_system(3.0, 0.05, 1.0, 1.0);
  const ImplicitEulerStepper stepper(s.grid, s.mass, s.stiffness, 0.001);
  const SourceAssembler src(s.grid, Mollifier{0.005});
  Eigen::VectorXd q = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.grid.node_count()));
  for (int k = 0; k < 200; ++k) {
    q = stepper.step(q, 10.0 * src.unit_load({0.013 * k, -0.007 * k}));
    EXPECT_GE(q.minCoeff(), -1e-8);
  }
}

TEST(ImplicitEuler, ShiftEquivariance) {
  auto s = make_system(1.0, 0.1, 1.0, 1.0);
  const ImplicitEulerStepper stepper(s.grid, s.mass, s.stiffness, 0.01);
  const SourceAssembler src(s.grid, Mollifier{0.02});
  const Vec2 x0{0.13, -0.21};
  const Vec2 x1{0.13 + 0.1, -0.21};
  Eigen::VectorXd a = bump(s.grid, {0.0, 0.0});
  Eigen::VectorXd b = bump(s.grid, {0.1, 0.0});
  for (int k = 0; k < 10; ++k) {
    a = stepper.step(a, src.unit_load(x0));
    b = stepper.step(b, src.unit_load(x1));
  }
  const long n = static_cast<long>(s.grid.cells_per_axis());
  double worst = 0.0;
  for (long j = 0; j < n; ++j) {
    for (long i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(a[static_cast<Eigen::Index>(s.grid.node_index(i, j))] -
                                       b[static_cast<Eigen::Index>(s.grid.node_index(i + 1, j))]));
    }
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(FieldEval, NodalAndCentroidValues) {
  const PeriodicGrid g(1.0, 0.25);
  FieldState s = FieldState::zeros(2, g.node_count());
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (auto& q : s.coefficients) {
    for (Eigen::Index k = 0; k < q.size(); ++k) q[k] = u(gen);
  }
  const std::size_t node = g.node_index(2, 5);
  s.coefficients[0][static_cast<Eigen::Index>(node)] = 2.5;
  EXPECT_DOUBLE_EQ(eval_field(s, g, g.node_position(node))[0], 2.5);
  const auto nodes = g.element_nodes(17);
  Vec2 centroid{0.0, 0.0};
  double mean = 0.0;
  const Vec2 base = g.node_position(nodes[0]);
  for (auto n : nodes) {
    centroid += (1.0 / 3.0) * (base + g.minimal_image(g.node_position(n) - base));
    mean += s.coefficients[1][static_cast<Eigen::Index>(n)] / 3.0;
  }
  EXPECT_NEAR(eval_field(s, g, centroid)[1], mean, 1e-13);
}

TEST(FieldEval, ConstantField) {
  const PeriodicGrid g(1.0, 0.25);
  FieldState s = FieldState::zeros(1, g.node_count());
  s.coefficients[0].setConstant(1.7);
  for (const Vec2 p : {Vec2{0.01, 0.33}, Vec2{-0.99, 0.5}, Vec2{5.3, -7.1}}) {
    EXPECT_NEAR(eval_field(s, g, p)[0], 1.7, 1e-14);
    const auto grad = eval_field_gradient(s, g, p)[0];
    EXPECT_NEAR(grad.x, 0.0, 1e-13);
    EXPECT_NEAR(grad.y, 0.0, 1e-13);
  }
}

TEST(FieldEval, LinearFunctionsAreReproduced) {
  const PeriodicGrid g(2.0, 0.1);
  FieldState s = FieldState::zeros(2, g.node_count());
  s.coefficients[0] = interpolate(g, [](Vec2 p) { return p.x; });
  s.coefficients[1] = interpolate(g, [](Vec2 p) { return 2.0 * p.x - 3.0 * p.y; });
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 50; ++k) {
    const Vec2 p{u(gen), u(gen)};
    const auto grad = eval_field_gradient(s, g, p);
    EXPECT_NEAR(grad[0].x, 1.0, 1e-12);
    EXPECT_NEAR(grad[0].y, 0.0, 1e-12);
    EXPECT_NEAR(grad[1].x, 2.0, 1e-12);
    EXPECT_NEAR(grad[1].y, -3.0, 1e-12);
    EXPECT_NEAR(eval_field(s, g, p)[1], 2.0 * p.x - 3.0 * p.y, 1e-12);
  }
}

TEST(FieldEval, GradientConvergesFirstOrder) {
  auto f = [](Vec2 p) { return std::exp(-(p.x * p.x + 2.0 * p.y * p.y)); };
  auto grad = [&](Vec2 p) { return Vec2{-2.0 * p.x * f(p), -4.0 * p.y * f(p)}; };
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec2> points;
  for (int k = 0; k < 200; ++k) points.push_back({u(gen), u(gen)});
  std::vector<double> errors;
  for (double h : {0.1, 0.05, 0.025}) {
    const PeriodicGrid g(3.0, h);
    FieldState s = FieldState::zeros(1, g.node_count());
    s.coefficients[0] = interpolate(g, f);
    double worst = 0.0;
    for (const auto& p : points) worst = std::max(worst, (eval_field_gradient(s, g, p)[0] - grad(p)).norm());
    errors.push_back(worst);
  }
  for (std::size_t k = 1; k < errors.size(); ++k) {
    const double order = std::log2(errors[k - 1] / errors[k]);
    EXPECT_GT(order, 0.7);
  }
}

TEST(FieldEval, ValueAndGradientTogether) {
  const PeriodicGrid g(1.0, 0.1);
  FieldState s = FieldState::zeros(3, g.node_count());
  for (std::size_t i = 0; i < 3; ++i) s.coefficients[i] = bump(g, {0.1 * static_cast<double>(i), 0.0});
  std::vector<double> v;
  std::vector<Vec2> gr;
  const Vec2 p{0.234, -0.417};
  eval_field_and_gradient(s, g, p, v, gr);
  const auto v2 = eval_field(s, g, p);
  const auto g2 = eval_field_gradient(s, g, p);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(v[i], v2[i]);
    EXPECT_EQ(gr[i], g2[i]);
  }
}
