#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "neurowire/duhamel.hpp"
#include "neurowire/errors.hpp"
#include "neurowire/quadrature.hpp"
#include "oracles.hpp"

using namespace neurowire;

namespace {

MollifiedSourceSpec stationary_source(double amplitude, double x, double y, double t_end, double eps) {
  const std::array<double, 2> p{x, y};
  return {[amplitude](double) { return amplitude; }, SampledPath::stationary(p, 0.0, t_end), eps};
}

SampledPath line_path(double t_end, double vx, double vy) {
  SampledPath path(2);
  for (int k = 0; k <= 40; ++k) {
    const double s = t_end * k / 40.0;
    const std::array<double, 2> p{-0.3 + vx * s, 0.1 + vy * s};
    path.append(s, p);
  }
  return path;
}

}  // namespace

TEST(SampledPath, InterpolatesLinearly) {
  SampledPath path(2);
  path.append(0.0, std::array<double, 2>{0.0, 0.0});
  path.append(2.0, std::array<double, 2>{2.0, -4.0});
  const auto p = path.evaluate(0.5);
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], -1.0);
  EXPECT_TRUE(path.covers(0.0, 2.0));
  EXPECT_FALSE(path.covers(0.0, 2.1));
  EXPECT_THROW(path.evaluate(3.0), InputError);
  EXPECT_THROW(path.append(2.0, std::array<double, 2>{0.0, 0.0}), InputError);
  EXPECT_THROW(path.append(3.0, std::array<double, 1>{0.0}), InputError);
}

TEST(SampledPath, SupDistanceAtBreakpoints) {
  SampledPath a(1);
  a.append(0.0, std::array<double, 1>{0.0});
  a.append(1.0, std::array<double, 1>{1.0});
  a.append(2.0, std::array<double, 1>{0.0});
  SampledPath b(1);
  b.append(0.0, std::array<double, 1>{0.0});
  b.append(2.0, std::array<double, 1>{0.0});
  EXPECT_DOUBLE_EQ(sup_distance(a, b, 0.0, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(sup_distance(a, b, 0.0, 0.5), 0.5);
}

TEST(Quadrature, GaussLegendreIsExactForPolynomials) {
  const auto& rule = gauss_legendre(5);
  const double integral = integrate_composite([](double x) { return std::pow(x, 9) + 3 * x * x; }, 0.0, 2.0, 1, rule);
  EXPECT_NEAR(integral, std::pow(2.0, 10) / 10.0 + 8.0, 1e-11);
}

TEST(Quadrature, GradedEdgesRespectLimits) {
  const auto e = graded_edges(10.0, 0.01, 2.0, 1.0);
  ASSERT_GE(e.size(), 3u);
  EXPECT_EQ(e.front(), 0.0);
  EXPECT_DOUBLE_EQ(e.back(), 10.0);
  EXPECT_NEAR(e[1], 0.01, 1e-15);
  for (std::size_t k = 1; k < e.size(); ++k) {
    EXPECT_GT(e[k], e[k - 1]);
    EXPECT_LE(e[k] - e[k - 1], 1.0 + 1e-12);
  }
}

TEST(Quadrature, SpecValidation) {
  QuadratureSpec q;
  q.time_points = 1;
  EXPECT_THROW(q.validate(), InputError);
  q = {};
  q.space_halfwidth = 0.0;
  EXPECT_THROW(q.validate(), InputError);
}

TEST(Duhamel, ZeroDataGivesZero) {
  const std::array<double, 2> x{0.3, -0.2};
  EXPECT_EQ(duhamel_solve({}, InitialField::zero(), {1.0, 0.0, 2}, x, 1.0), 0.0);
}

TEST(Duhamel, ConstantInitialDataIsPreserved) {
  const std::array<double, 2> x{0.3, -0.2};
  EXPECT_DOUBLE_EQ(duhamel_solve({}, InitialField::constant(2.5), {1.0, 0.0, 2}, x, 3.0), 2.5);
  EXPECT_NEAR(duhamel_solve({}, InitialField::constant(2.5), {1.0, 0.4, 2}, x, 3.0), 2.5 * std::exp(-1.2), 1e-14);
}

TEST(Duhamel, SampledInitialDataEvolvesLikeAGaussian) {
  // A Gaussian of variance 2s per axis evolves into one of variance 2(s + Dt).
  const double s = 0.2;
  const KernelParams p{0.5, 0.0, 2};
  const auto u0 = InitialField::sampled([s](std::span<const double> y) {
    return std::exp(-(y[0] * y[0] + y[1] * y[1]) / (4 * s)) / (4 * oracle::pi * s);
  });
  const std::array<double, 2> x{0.4, 0.1};
  const double expected = oracle::heat_kernel({0.4, 0.1}, s + p.D * 0.6, 1.0, 0.0);
  QuadratureSpec q;
  q.space_points = 96;
  EXPECT_NEAR(evolve_initial(u0, x, 0.6, p, q) / expected, 1.0, 1e-8);
}

TEST(Duhamel, StationarySourceMatchesDirectConvolution) {
  const std::array<MollifiedSourceSpec, 1> sources{stationary_source(1.0, 0.0, 0.0, 1.0, 0.01)};
  const std::array<double, 2> x{0.5, 0.0};
  const double value = duhamel_solve(sources, InitialField::zero(), {1.0, 0.0, 2}, x, 1.0);
  const double reference = oracle::stationary_source_direct(0.5, 0.0, 1.0, 0.01);
  EXPECT_NEAR(value / reference, 1.0, 1e-3);
}

TEST(Duhamel, ClosedFormAndQuadratureAgree) {
  const MollifiedSourceSpec moving{[](double s) { return 1.0 + 0.5 * std::sin(3 * s); }, line_path(1.0, 0.8, -0.4), 0.02};
  const std::array<MollifiedSourceSpec, 1> sources{moving};
  for (const KernelParams p : {KernelParams{1.0, 0.0, 2}, KernelParams{0.5, 0.7, 2}, KernelParams{2.0, 1.5, 2}}) {
    for (const auto& x : {std::array<double, 2>{0.2, 0.0}, std::array<double, 2>{-0.5, 0.4}}) {
      const double a = duhamel_solve(sources, InitialField::zero(), p, x, 1.0, {}, ConvolutionMode::ClosedForm);
      const double b = duhamel_solve(sources, InitialField::zero(), p, x, 1.0, {}, ConvolutionMode::Quadrature);
      EXPECT_NEAR(a / b, 1.0, 1e-3) << "D " << p.D << " lambda " << p.lambda;
    }
  }
}

TEST(Duhamel, GradientMatchesFiniteDifferences) {
  const MollifiedSourceSpec moving{[](double) { return 2.0; }, line_path(1.0, 0.5, 0.2), 0.05};
  const std::array<MollifiedSourceSpec, 1> sources{moving};
  const KernelParams p{1.0, 0.5, 2};
  const std::array<double, 2> x{0.3, 0.2};
  const auto g = duhamel_gradient(sources, InitialField::constant(1.0), p, x, 1.0);
  const double h = 1e-4;
  for (std::size_t a = 0; a < 2; ++a) {
    auto xp = x;
    auto xm = x;
    xp[a] += h;
    xm[a] -= h;
    const double fd = (duhamel_solve(sources, InitialField::constant(1.0), p, xp, 1.0) -
                       duhamel_solve(sources, InitialField::constant(1.0), p, xm, 1.0)) /
                      (2 * h);
    EXPECT_NEAR(g[a], fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST(Duhamel, LinearInSources) {
  const auto s1 = stationary_source(1.0, 0.0, 0.0, 1.0, 0.01);
  const auto s2 = stationary_source(3.0, 0.4, 0.0, 1.0, 0.01);
  const std::array<MollifiedSourceSpec, 2> both{s1, s2};
  const std::array<MollifiedSourceSpec, 1> first{s1};
  const std::array<MollifiedSourceSpec, 1> second{s2};
  const std::array<double, 2> x{0.2, 0.1};
  const KernelParams p{1.0, 1.0, 2};
  EXPECT_NEAR(duhamel_solve(both, InitialField::zero(), p, x, 1.0),
              duhamel_solve(first, InitialField::zero(), p, x, 1.0) + duhamel_solve(second, InitialField::zero(), p, x, 1.0),
              1e-12);
}

TEST(Duhamel, Errors) {
  const std::array<MollifiedSourceSpec, 1> shortpath{stationary_source(1.0, 0.0, 0.0, 0.5, 0.01)};
  const std::array<double, 2> x{0.0, 0.0};
  EXPECT_THROW(duhamel_solve(shortpath, InitialField::zero(), {}, x, 1.0), InputError);
  EXPECT_THROW(duhamel_solve({}, InitialField::zero(), {}, x, 0.0), DomainError);
  const std::array<double, 3> x3{0.0, 0.0, 0.0};
  EXPECT_THROW(duhamel_solve({}, InitialField::zero(), {}, x3, 1.0), InputError);
}

TEST(KernelConvolution, SemigroupIdentity) {
  const KernelParams p{0.7, 0.0, 2};
  const std::array<double, 2> x{0.3, -0.6};
  const std::vector<double> xv{0.3, -0.6};
  EXPECT_NEAR(kernel_convolution(x, 0.2, 0.5, p), oracle::heat_kernel(xv, 0.7, p.D, 0.0), 1e-9);
}
