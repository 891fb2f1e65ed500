#include <gtest/gtest.h>

#include <cmath>

#include "neurowire/errors.hpp"
#include "neurowire/field.hpp"
#include "neurowire/rng.hpp"
#include "neurowire/walker.hpp"

using namespace neurowire;

namespace {

Walker soma(std::size_t id, Vec2 p) {
  Walker w;
  w.id = id;
  w.kind = WalkerKind::Soma;
  w.position = p;
  return w;
}

Walker cone(std::size_t id, Vec2 p, std::optional<std::size_t> origin = std::nullopt, double sigma = 0.0) {
  Walker w;
  w.id = id;
  w.kind = WalkerKind::GrowthCone;
  w.position = p;
  w.origin_soma = origin;
  w.sigma = sigma;
  return w;
}

const WeightFn kZeroWeights = [](const Walker&, std::size_t, std::span<const double>, double) { return 0.0; };
const WeightFn kUnitWeights = [](const Walker&, std::size_t, std::span<const double>, double) { return 1.0; };

}  // namespace

TEST(Rng, DeterministicAndCounterBased) {
  RngStream a{42, 7, 0};
  RngStream b{42, 7, 0};
  for (int k = 0; k < 100; ++k) EXPECT_EQ(a.next_uniform(), b.next_uniform());
  RngStream c{42, 7, 0};
  const auto first = c.next_normal_pair();
  RngStream d{42, 7, 0};
  const auto again = d.next_normal_pair();
  EXPECT_EQ(first, again);
  EXPECT_EQ(c.counter, 2u);
  // Jumping straight to a counter gives the same draw as stepping there.
  RngStream e{42, 7, 50};
  RngStream f{42, 7, 0};
  for (int k = 0; k < 50; ++k) f.next_uniform();
  EXPECT_EQ(e.next_uniform(), f.next_uniform());
  EXPECT_EQ(RngStream({42, 7, 0}).bits_at(3), RngStream({42, 7, 0}).bits_at(3));
  EXPECT_NE(RngStream({42, 7, 0}).bits_at(3), RngStream({42, 8, 0}).bits_at(3));
  EXPECT_NE(RngStream({42, 7, 0}).bits_at(3), RngStream({43, 7, 0}).bits_at(3));
}

TEST(Rng, UniformInOpenInterval) {
  RngStream s{1, 2, 0};
  double sum = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double u = s.next_uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000.0, 0.5, 0.005);
}

TEST(Brownian, ZeroSigmaStillAdvances) {
  RngStream s{1, 1, 0};
  const Vec2 z = brownian_increment(s, 0.001, 0.0);
  EXPECT_EQ(z.x, 0.0);
  EXPECT_EQ(z.y, 0.0);
  EXPECT_EQ(s.counter, 2u);
}

TEST(Brownian, SigmaOnlyScalesTheSameDraws) {
  RngStream a{9, 3, 0};
  RngStream b{9, 3, 0};
  for (int k = 0; k < 20; ++k) {
    const Vec2 x = brownian_increment(a, 0.001, 0.05);
    const Vec2 y = brownian_increment(b, 0.001, 0.2);
    EXPECT_NEAR(4.0 * x.x, y.x, 1e-15);
    EXPECT_NEAR(4.0 * x.y, y.y, 1e-15);
  }
}

TEST(Brownian, LiteralNoiseDropsSqrtDt) {
  RngStream a{9, 3, 0};
  RngStream b{9, 3, 0};
  const Vec2 x = brownian_increment(a, 0.01, 0.2, false);
  const Vec2 y = brownian_increment(b, 0.01, 0.2, true);
  EXPECT_NEAR(y.x, 10.0 * x.x, 1e-14);
}

TEST(Brownian, VarianceWithinChiSquaredBand) {
  RngStream s{5, 0, 0};
  const int n = 1000000;
  double sx = 0.0, sxx = 0.0, sy = 0.0, syy = 0.0;
  for (int k = 0; k < n; ++k) {
    const Vec2 z = brownian_increment(s, 0.001, 0.2);
    sx += z.x;
    sxx += z.x * z.x;
    sy += z.y;
    syy += z.y * z.y;
  }
  const double vx = (sxx - sx * sx / n) / (n - 1);
  const double vy = (syy - sy * sy / n) / (n - 1);
  EXPECT_NEAR(vx / 4e-5, 1.0, 0.02);
  EXPECT_NEAR(vy / 4e-5, 1.0, 0.02);
}

TEST(Drift, ZeroWeightsAndConstantFields) {
  const PeriodicGrid g(1.0, 0.1);
  FieldState f = FieldState::zeros(1, g.node_count());
  f.coefficients[0] = interpolate(g, [](Vec2 p) { return p.x * p.x; });
  const Walker w = cone(0, {0.23, 0.11});
  const Vec2 d0 = drift_eval(w, f, g, kZeroWeights, 0.0);
  EXPECT_EQ(d0.x, 0.0);
  EXPECT_EQ(d0.y, 0.0);
  f.coefficients[0].setConstant(4.0);
  const Vec2 d1 = drift_eval(w, f, g, kUnitWeights, 0.0);
  EXPECT_NEAR(d1.norm(), 0.0, 1e-12);
}

TEST(Drift, LinearFieldsWithOppositeWeights) {
  const PeriodicGrid g(2.0, 0.1);
  FieldState f = FieldState::zeros(2, g.node_count());
  f.coefficients[0] = interpolate(g, [](Vec2 p) { return p.x; });
  f.coefficients[1] = interpolate(g, [](Vec2 p) { return p.y; });
  const WeightFn w = [](const Walker&, std::size_t k, std::span<const double>, double) { return k == 0 ? 1.0 : -1.0; };
  const Vec2 d = drift_eval(cone(0, {0.234, -0.561}), f, g, w, 0.0);
  EXPECT_NEAR(d.x, 1.0, 1e-12);
  EXPECT_NEAR(d.y, -1.0, 1e-12);
}

TEST(Drift, ContractViolations) {
  const PeriodicGrid g(1.0, 0.1);
  const FieldState f = FieldState::zeros(1, g.node_count());
  EXPECT_THROW(drift_eval(soma(0, {0.0, 0.0}), f, g, kUnitWeights, 0.0), ContractViolation);
  Walker stopped = cone(0, {0.0, 0.0});
  stopped.active = false;
  EXPECT_THROW(drift_eval(stopped, f, g, kUnitWeights, 0.0), ContractViolation);
  Walker late = cone(0, {0.0, 0.0});
  late.activation_time = 0.8;
  EXPECT_THROW(drift_eval(late, f, g, kUnitWeights, 0.5), ContractViolation);
  EXPECT_NO_THROW(drift_eval(late, f, g, kUnitWeights, 0.8));
}

TEST(EulerMaruyama, ZeroDynamicsKeepsEverythingFixed) {
  const PeriodicGrid g(1.0, 0.1);
  const FieldState f = FieldState::zeros(3, g.node_count());
  std::vector<Walker> w{soma(0, {0.1, 0.2}), cone(1, {0.1, 0.2}, 0), cone(2, {-0.5, 0.5})};
  std::vector<RngStream> streams{{1, 0, 0}, {1, 1, 0}, {1, 2, 0}};
  const auto before = w;
  for (int k = 0; k < 10; ++k) euler_maruyama_step(w, f, g, kZeroWeights, 0.001 * k, 0.001, streams);
  for (std::size_t j = 0; j < w.size(); ++j) EXPECT_EQ(w[j].position, before[j].position);
  for (const auto& s : streams) EXPECT_EQ(s.counter, 20u);
}

TEST(EulerMaruyama, SomasAndStoppedConesNeverMove) {
  const PeriodicGrid g(1.0, 0.1);
  FieldState f = FieldState::zeros(1, g.node_count());
  f.coefficients[0] = interpolate(g, [](Vec2 p) { return std::sin(3.14159 * p.x); });
  Walker s = soma(0, {0.1, 0.2});
  s.sigma = 0.5;
  Walker stopped = cone(1, {0.3, 0.3}, std::nullopt, 0.5);
  stopped.active = false;
  Walker waiting = cone(2, {0.0, 0.0}, std::nullopt, 0.5);
  waiting.activation_time = 1.0;
  std::vector<Walker> w{s, stopped, waiting, cone(3, {0.0, 0.0}, std::nullopt, 0.5)};
  std::vector<RngStream> streams{{1, 0, 0}, {1, 1, 0}, {1, 2, 0}, {1, 3, 0}};
  euler_maruyama_step(w, f, g, kUnitWeights, 0.0, 0.01, streams);
  EXPECT_EQ(w[0].position, s.position);
  EXPECT_EQ(w[1].position, stopped.position);
  EXPECT_EQ(w[2].position, waiting.position);
  EXPECT_NE(w[3].position, Vec2(0.0, 0.0));
}

TEST(EulerMaruyama, DriftStepAndWrap) {
  const PeriodicGrid g(3.0, 0.05);
  FieldState f = FieldState::zeros(1, g.node_count());
  f.coefficients[0] = interpolate(g, [](Vec2 p) { return 2.0 * p.x; });
  std::vector<Walker> w{cone(0, {1.0, 0.3})};
  std::vector<RngStream> streams{{1, 0, 0}};
  euler_maruyama_step(w, f, g, kUnitWeights, 0.0, 0.01, streams);
  EXPECT_NEAR(w[0].position.x, 1.02, 1e-12);
  EXPECT_NEAR(w[0].position.y, 0.3, 1e-12);
  // Leaving through the top edge re-enters at the bottom.
  f.coefficients[0] = interpolate(g, [](Vec2 p) { return 3.0 * p.y; });
  std::vector<Walker> edge{cone(0, {0.5, 2.91})};
  euler_maruyama_step(edge, f, g, kUnitWeights, 0.0, 0.05, streams);
  EXPECT_NEAR(edge[0].position.y, -2.94, 1e-12);
  EXPECT_NEAR(edge[0].position.x, 0.5, 1e-12);
}

TEST(EulerMaruyama, NonFiniteDriftIsFatal) {
  const PeriodicGrid g(1.0, 0.1);
  FieldState f = FieldState::zeros(1, g.node_count());
  f.coefficients[0].setConstant(std::nan(""));
  std::vector<Walker> w{cone(0, {0.0, 0.0})};
  std::vector<RngStream> streams{{1, 0, 0}};
  EXPECT_THROW(euler_maruyama_step(w, f, g, kUnitWeights, 0.0, 0.01, streams), NumericError);
}

TEST(Inactivation, ForeignSomaContact) {
  const PeriodicGrid g(3.0, 0.05);
  std::vector<Walker> w{soma(0, {0.0, 0.0}), soma(1, {1.0, 0.0}), cone(2, {1.05, 0.0}, 0)};
  const auto events = proximity_inactivation(w, g, {0.1}, 0.5);
  ASSERT_EQ(events.size(), 1u);
  EXPECT_FALSE(w[2].active);
  EXPECT_EQ(events[0].id_a, 2u);
  EXPECT_EQ(events[0].id_b, 1u);
  EXPECT_EQ(events[0].kind, ContactKind::ConeSoma);
  EXPECT_DOUBLE_EQ(events[0].time, 0.5);
}

TEST(Inactivation, FarConeStaysActive) {
  const PeriodicGrid g(3.0, 0.05);
  std::vector<Walker> w{soma(0, {0.0, 0.0}), cone(1, {0.2, 0.0}, 0), cone(2, {0.2, 0.2})};
  w[1].has_exited_origin = true;
  EXPECT_TRUE(proximity_inactivation(w, g, {0.1}, 0.0).empty());
  EXPECT_TRUE(w[1].active);
  EXPECT_TRUE(w[2].active);
}

TEST(Inactivation, PeriodicDistance) {
  const PeriodicGrid g(3.0, 0.05);
  std::vector<Walker> w{soma(0, {-2.98, 0.0}), cone(1, {2.99, 0.0})};
  const auto events = proximity_inactivation(w, g, {0.1}, 0.0);
  EXPECT_EQ(events.size(), 1u);
  EXPECT_FALSE(w[1].active);
}

TEST(Inactivation, OriginGrace) {
  const PeriodicGrid g(3.0, 0.05);
  std::vector<Walker> w{soma(0, {0.0, 0.0}), cone(1, {0.0, 0.0}, 0)};
  EXPECT_TRUE(proximity_inactivation(w, g, {0.1}, 0.0).empty());
  EXPECT_FALSE(w[1].has_exited_origin);
  w[1].position = {0.15, 0.0};
  EXPECT_TRUE(proximity_inactivation(w, g, {0.1}, 0.1).empty());
  EXPECT_TRUE(w[1].has_exited_origin);
  w[1].position = {0.05, 0.0};
  EXPECT_EQ(proximity_inactivation(w, g, {0.1}, 0.2).size(), 1u);
  EXPECT_FALSE(w[1].active);
}

TEST(Inactivation, ConeConeStopsBoth) {
  const PeriodicGrid g(3.0, 0.05);
  std::vector<Walker> w{cone(0, {0.0, 0.0}), cone(1, {0.05, 0.0})};
  const auto events = proximity_inactivation(w, g, {0.1}, 0.0);
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].kind, ContactKind::ConeCone);
  EXPECT_FALSE(w[0].active);
  EXPECT_FALSE(w[1].active);
}

TEST(Inactivation, TouchingAStoppedConeStops) {
  const PeriodicGrid g(3.0, 0.05);
  std::vector<Walker> w{cone(0, {0.0, 0.0}), cone(1, {0.05, 0.0})};
  w[0].active = false;
  const auto events = proximity_inactivation(w, g, {0.1}, 0.0);
  ASSERT_EQ(events.size(), 1u);
  EXPECT_FALSE(w[1].active);
}

TEST(Inactivation, PreActivationConesAreIgnored) {
  const PeriodicGrid g(3.0, 0.05);
  std::vector<Walker> w{soma(0, {0.0, 0.0}), cone(1, {0.2, 0.0}, 0), cone(2, {0.2, 0.0}, 0)};
  w[1].has_exited_origin = true;
  w[2].activation_time = 0.8;
  EXPECT_TRUE(proximity_inactivation(w, g, {0.1}, 0.5).empty());
  EXPECT_EQ(proximity_inactivation(w, g, {0.1}, 0.8).size(), 1u);
}

TEST(Inactivation, Errors) {
  const PeriodicGrid g(3.0, 0.05);
  std::vector<Walker> w{cone(1, {0.0, 0.0})};
  EXPECT_THROW(proximity_inactivation(w, g, {0.1}, 0.0), InputError);
  w[0].id = 0;
  EXPECT_THROW(proximity_inactivation(w, g, {0.0}, 0.0), DomainError);
}
