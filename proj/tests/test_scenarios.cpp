#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "neurowire/coefficients.hpp"
#include "neurowire/errors.hpp"
#include "neurowire/scenario.hpp"

using namespace neurowire;

namespace {

constexpr double pi = std::numbers::pi;

Walker make(WalkerKind kind) {
  Walker w;
  w.kind = kind;
  return w;
}

const Walker kCone = make(WalkerKind::GrowthCone);
const Walker kSoma = make(WalkerKind::Soma);

}  // namespace

TEST(Coefficients, SomaEmissions) {
  const auto base = base_coefficients(15.0, 10.0);
  const auto dense = dense_network_coefficients(15.0, 10.0);
  for (double c3 : {0.0, 1.0, 10.0}) {
    for (double t : {0.0, 2.0, 5.0}) {
      const std::array<double, 3> c{0.5, 0.2, c3};
      EXPECT_EQ(eval_emission(base, kRepulsive, kSoma, c, t), 3.0);
      EXPECT_EQ(eval_emission(dense, kRepulsive, kSoma, c, t), 5.0);
      EXPECT_EQ(eval_emission(base, kTrigger, kSoma, c, t), 0.0);
      EXPECT_EQ(eval_emission(base, kRepulsive, kCone, c, t), 0.0);
      EXPECT_DOUBLE_EQ(eval_emission(base, kAttractive, kSoma, c, t), 5.0 * std::atan(0.5 * c3));
    }
  }
}

TEST(Coefficients, ConeAttractiveEmission) {
  const auto base = base_coefficients(15.0, 10.0);
  const std::array<double, 3> zero{0.0, 0.0, 0.0};
  const double expected = 15.0 * std::atan(-3.5) + 7.5 * pi;
  EXPECT_NEAR(eval_emission(base, kAttractive, kCone, zero, 0.0), expected, 1e-13);
  EXPECT_NEAR(expected, 4.1745, 1e-4);
  const std::array<double, 3> c{0.3, 0.0, 2.0};
  EXPECT_NEAR(eval_emission(base, kAttractive, kCone, c, 0.7),
              15.0 * std::atan(2.25 * 2.0 - 3.5) + 7.5 * pi + 15.0 * std::atan(1.4), 1e-13);
  const auto dense = dense_network_coefficients(15.0, 10.0);
  EXPECT_NEAR(eval_emission(dense, kAttractive, kCone, c, 0.7),
              5.0 * std::atan(2.25 * 2.0 - 3.5) + 2.5 * pi + 5.0 * std::atan(1.4), 1e-13);
}

TEST(Coefficients, ConeTriggerEmission) {
  const auto base = base_coefficients(15.0, 10.0);
  const std::array<double, 3> c{1.5, 0.0, 0.0};
  EXPECT_NEAR(eval_emission(base, kTrigger, kCone, c, 0.4),
              20.0 * std::atan(2.25 * 1.5 - 3.0) + 7.5 * pi + 15.0 * std::atan(0.8), 1e-13);
}

TEST(Coefficients, Weights) {
  const double beta = 15.0;
  const double gamma = 10.0;
  const auto spec = base_coefficients(beta, gamma);
  const std::array<double, 3> c{1.0, 2.0, 3.0};
  EXPECT_NEAR(eval_weight(spec, kCone, kAttractive, c, 1.3), beta / 2.0, 1e-14);
  EXPECT_NEAR(eval_weight(spec, kCone, kRepulsive, c, 1.3), -gamma / 2.0, 1e-14);
  EXPECT_NEAR(eval_weight(spec, kCone, kAttractive, c, 1e6), beta, 1e-4);
  EXPECT_NEAR(eval_weight(spec, kCone, kRepulsive, c, 1e6), 0.0, 1e-4);
  EXPECT_EQ(eval_weight(spec, kCone, kTrigger, c, 2.0), 0.0);
  const double t = 0.4;
  EXPECT_NEAR(eval_weight(spec, kCone, kAttractive, c, t), beta / pi * std::atan(0.3 * (10 * t - 13)) + beta / 2, 1e-13);
  for (std::size_t k = 0; k < kSpeciesCount; ++k) {
    EXPECT_EQ(eval_weight(spec, kSoma, k, c, 3.0), 0.0);
  }
}

TEST(Coefficients, RangesBoundEveryEvaluation) {
  const auto spec = base_coefficients(20.0, 5.0);
  const double horizon = 5.0;
  for (std::size_t kind = 0; kind < 2; ++kind) {
    for (std::size_t i = 0; i < kSpeciesCount; ++i) {
      for (const auto* table : {&spec.emission, &spec.weight}) {
        const auto& f = (*table)[kind][i];
        const auto [lo, hi] = f.range(horizon);
        for (double c0 : {-5.0, 0.0, 0.5, 3.0, 50.0}) {
          for (double c2 : {-5.0, 0.0, 1.0, 40.0}) {
            for (double t = 0.0; t <= horizon; t += 0.25) {
              const std::array<double, 3> c{c0, 0.0, c2};
              const double v = f(c, t);
              EXPECT_GE(v, lo - 1e-12);
              EXPECT_LE(v, hi + 1e-12);
            }
          }
        }
      }
    }
  }
  const auto [wlo, whi] = spec.weight[0][kAttractive].range(horizon);
  EXPECT_GT(wlo, 0.0);
  EXPECT_LT(whi, 20.0);
  const auto [rlo, rhi] = spec.weight[0][kRepulsive].range(horizon);
  EXPECT_GT(rlo, -5.0);
  EXPECT_LT(rhi, 0.0);
}

TEST(Coefficients, LipschitzAndZero) {
  const auto spec = base_coefficients(15.0, 10.0);
  EXPECT_NEAR(spec.emission[0][kAttractive].lipschitz_in_concentration(), 15.0 * 2.25, 1e-12);
  EXPECT_TRUE(zero_coefficients().emission[0][0].is_zero());
  EXPECT_FALSE(spec.emission[0][0].is_zero());
  CoefficientSpec bad = spec;
  bad.weight[1][0] = {{CoefficientTerm::constant(1.0)}};
  EXPECT_THROW(bad.validate(), InputError);
}

TEST(Experiments, ExperimentOneLayout) {
  ExperimentOverrides o;
  const auto c = build_experiment(1, o, 11);
  const auto somas = resolve_soma_positions(c);
  ASSERT_EQ(somas.size(), 9u);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t k = 0; k < 3; ++k) {
      const Vec2 site{-3.0 + (k + 0.5) * 2.0, -3.0 + (r + 0.5) * 2.0};
      const Vec2 p = somas[r * 3 + k];
      EXPECT_LE(std::abs(p.x - site.x), 0.3 + 1e-12);
      EXPECT_LE(std::abs(p.y - site.y), 0.3 + 1e-12);
    }
  }
  EXPECT_EQ(build_walkers(c).size(), 18u);
  o.cones_per_soma = 3;
  const auto c27 = build_experiment(1, o, 11);
  const auto walkers = build_walkers(c27);
  EXPECT_EQ(walkers.size(), 36u);
  EXPECT_DOUBLE_EQ(walkers[9 + 2].activation_time, 1.6);
  EXPECT_EQ(walkers[9 + 2].position, somas[0]);
  EXPECT_EQ(c27.sigma, 0.2);
  EXPECT_EQ(c27.epsilon, 0.01);
  EXPECT_EQ(c27.horizon, 5.0);
  EXPECT_EQ(c27.coefficients, dense_network_coefficients(15.0, 10.0));
}

TEST(Experiments, PresetsAndDefaults) {
  const auto c2 = build_experiment(2, {}, 3);
  EXPECT_EQ(resolve_soma_positions(c2).size(), 6u);
  EXPECT_EQ(c2.epsilon, 0.1);
  const auto c3 = build_experiment(3, {.epsilon = 0.02}, 3);
  EXPECT_EQ(c3.sigma, 0.1);
  EXPECT_EQ(c3.dt, 0.001);
  EXPECT_EQ(c3.half_length, 3.0);
  EXPECT_EQ(c3.spacing, 0.05);
  EXPECT_EQ(c3.epsilon, 0.02);
  EXPECT_EQ(build_walkers(c3).size(), 4u);
  const auto c4 = build_experiment(4, {.beta = 5.0, .gamma = 20.0}, 3);
  EXPECT_EQ(c4.coefficients, base_coefficients(5.0, 20.0));
  EXPECT_EQ(resolve_soma_positions(c4).size(), 4u);
  EXPECT_THROW(build_experiment(5, {}, 1), InputError);
  EXPECT_THROW(build_experiment(0, {}, 1), InputError);
}

TEST(Experiments, LayoutIsDeterministicInSeed) {
  const auto a = resolve_soma_positions(build_experiment(2, {}, 8));
  const auto b = resolve_soma_positions(build_experiment(2, {}, 8));
  const auto c = resolve_soma_positions(build_experiment(2, {}, 9));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  const PeriodicGrid g(3.0, 0.05);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) EXPECT_GE(g.periodic_distance(a[i], a[j]), 1.0);
  }
}

TEST(ScenarioConfig, ValidationNamesTheField) {
  auto expect_field = [](ScenarioConfig c, const std::string& field) {
    try {
      c.validate();
      FAIL() << "expected ValidationError for " << field;
    } catch (const ValidationError& e) {
      EXPECT_EQ(e.field(), field);
    }
  };
  ScenarioConfig c = build_experiment(3, {}, 1);
  auto bad = c;
  bad.dt = -0.001;
  expect_field(bad, "dt");
  bad = c;
  bad.species[1].lambda = 0.0;
  expect_field(bad, "species[1].lambda");
  bad = c;
  bad.spacing = 0.07;
  expect_field(bad, "grid.spacing");
  bad = c;
  bad.somas.kind = SomaLayout::Kind::Explicit;
  bad.somas.positions = {{0.0, 0.0}, {3.5, 0.0}};
  expect_field(bad, "somas.positions[1]");
  bad = c;
  bad.epsilon = 0.0;
  expect_field(bad, "epsilon");
}
