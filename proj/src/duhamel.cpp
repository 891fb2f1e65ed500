#include "neurowire/duhamel.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "neurowire/errors.hpp"

namespace neurowire {

using std::numbers::pi;

double InitialField::operator()(std::span<const double> x) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Constant: return value_;
    case Kind::Sampled: return sampler_(x);
  }
  return 0.0;
}

namespace {

void validate_epsilon(double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("mollifier: epsilon must be positive");
}

// e^{-λτ} (4π(Dτ+ε))^{-d/2} exp(-|z|²/(4(Dτ+ε))), the mollified kernel.
double smoothed_kernel(double r2, double tau, double epsilon, const KernelParams& p,
                       double* grad_scale) {
  const double width = p.D * tau + epsilon;
  const double value = std::pow(4.0 * pi * width, -0.5 * p.dim) *
                       std::exp(-r2 / (4.0 * width) - p.lambda * tau);
  if (grad_scale) *grad_scale = -value / (2.0 * width);
  return value;
}

double smoothed_kernel_by_quadrature(std::span<const double> z, double tau, double epsilon,
                                     const KernelParams& p, std::size_t points,
                                     std::span<double> grad) {
  // ∫ η_ε(y) Φ(z - y, τ) dy. The product is a Gaussian centred at
  // ε z / (Dτ + ε) with per-axis variance 2εDτ/(Dτ + ε).
  const double dtau = p.D * tau;
  std::array<double, 3> centre{};
  for (std::size_t k = 0; k < z.size(); ++k) centre[k] = epsilon * z[k] / (dtau + epsilon);
  const double spread = std::sqrt(4.0 * epsilon * dtau / (dtau + epsilon));
  const double halfwidth = 8.0 * std::max(spread, 1e-300);
  std::array<double, 3> diff{};
  const auto d = static_cast<std::size_t>(p.dim);
  auto eta = [&](std::span<const double> y) {
    double r2 = 0.0;
    for (double v : y) r2 += v * v;
    return std::pow(4.0 * pi * epsilon, -0.5 * p.dim) * std::exp(-r2 / (4.0 * epsilon));
  };
  auto integrand = [&](std::span<const double> y) {
    for (std::size_t k = 0; k < d; ++k) diff[k] = z[k] - y[k];
    return eta(y) * heat_kernel_eval(std::span<const double>(diff.data(), d), tau, p);
  };
  const double value = integrate_box(integrand, std::span<const double>(centre.data(), d),
                                     halfwidth, p.dim, points);
  if (!grad.empty()) {
    for (std::size_t k = 0; k < d; ++k) {
      auto component = [&](std::span<const double> y) {
        for (std::size_t m = 0; m < d; ++m) diff[m] = z[m] - y[m];
        return eta(y) * -diff[k] / (2.0 * dtau) *
               heat_kernel_eval(std::span<const double>(diff.data(), d), tau, p);
      };
      grad[k] = integrate_box(component, std::span<const double>(centre.data(), d), halfwidth,
                              p.dim, points);
    }
  }
  return value;
}

}  // namespace

std::vector<double> history_panels(double t, double epsilon, double D) {
  const double scale = epsilon / D;
  const double first = 0.25 * scale;
  return graded_edges(t, first, 2.0, std::max(first, t / 8.0));
}

double mollified_source_response(std::span<const double> x, double t, const SampledPath& path,
                                 const Amplitude& amplitude, double epsilon,
                                 const KernelParams& p, const QuadratureSpec& q,
                                 ConvolutionMode mode, std::span<double> grad) {
  validate_epsilon(epsilon);
  if (!(t > 0.0)) {
    std::fill(grad.begin(), grad.end(), 0.0);
    return 0.0;
  }
  if (!path.covers(0.0, t)) throw InputError("duhamel: source path does not cover [0, t]");
  const auto d = static_cast<std::size_t>(p.dim);
  const Rule rule = make_rule(q.scheme, q.time_points);
  const auto edges = history_panels(t, epsilon, p.D);
  std::array<double, 3> xi{};
  std::array<double, 3> z{};
  std::array<double, 3> g{};
  std::fill(grad.begin(), grad.end(), 0.0);
  double total = 0.0;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double lo = edges[e];
    const double half = 0.5 * (edges[e + 1] - lo);
    const double mid = lo + half;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double tau = mid + half * rule.nodes[k];
      const double s = t - tau;
      const double f = amplitude(s);
      if (f == 0.0) continue;
      path.evaluate(s, std::span<double>(xi.data(), d));
      double r2 = 0.0;
      for (std::size_t m = 0; m < d; ++m) {
        z[m] = x[m] - xi[m];
        r2 += z[m] * z[m];
      }
      const double w = half * rule.weights[k] * f;
      if (mode == ConvolutionMode::ClosedForm) {
        double gscale = 0.0;
        total += w * smoothed_kernel(r2, tau, epsilon, p, grad.empty() ? nullptr : &gscale);
        for (std::size_t m = 0; m < grad.size(); ++m) grad[m] += w * gscale * z[m];
      } else {
        const std::span<double> gs = grad.empty() ? std::span<double>{} : std::span<double>(g.data(), d);
        total += w * smoothed_kernel_by_quadrature(std::span<const double>(z.data(), d), tau,
                                                   epsilon, p, q.space_points, gs);
        for (std::size_t m = 0; m < grad.size(); ++m) grad[m] += w * g[m];
      }
    }
  }
  return total;
}

double evolve_initial(const InitialField& u0, std::span<const double> x, double t,
                      const KernelParams& p, const QuadratureSpec& q, std::span<double> grad) {
  std::fill(grad.begin(), grad.end(), 0.0);
  switch (u0.kind()) {
    case InitialField::Kind::Zero: return 0.0;
    case InitialField::Kind::Constant: return u0.constant_value() * std::exp(-p.lambda * t);
    case InitialField::Kind::Sampled: break;
  }
  const auto d = static_cast<std::size_t>(p.dim);
  const double halfwidth = 8.0 * std::sqrt(4.0 * p.D * t);
  std::array<double, 3> shifted{};
  auto integrand = [&](std::span<const double> y) {
    for (std::size_t k = 0; k < d; ++k) shifted[k] = x[k] - y[k];
    return u0(std::span<const double>(shifted.data(), d)) * heat_kernel_eval(y, t, p);
  };
  const std::array<double, 3> origin{};
  const double value = integrate_box(integrand, std::span<const double>(origin.data(), d),
                                     halfwidth, p.dim, q.space_points);
  if (!grad.empty()) {
    // ∇(u0 * Φ) = u0 * ∇Φ with the kernel centred at x.
    std::array<double, 3> gk{};
    for (std::size_t k = 0; k < d; ++k) {
      auto component = [&](std::span<const double> y) {
        for (std::size_t m = 0; m < d; ++m) shifted[m] = x[m] - y[m];
        heat_kernel_grad(y, t, p, std::span<double>(gk.data(), d));
        return u0(std::span<const double>(shifted.data(), d)) * gk[k];
      };
      grad[k] = integrate_box(component, std::span<const double>(origin.data(), d), halfwidth,
                              p.dim, q.space_points);
    }
  }
  return value;
}

namespace {

double duhamel_at(std::span<const MollifiedSourceSpec> sources, const InitialField& u0,
                  const KernelParams& p, std::span<const double> x, double t,
                  const QuadratureSpec& q, ConvolutionMode mode) {
  double u = evolve_initial(u0, x, t, p, q);
  for (const auto& src : sources) {
    u += mollified_source_response(x, t, src.path, src.amplitude, src.epsilon, p, q, mode);
  }
  return u;
}

}  // namespace

double duhamel_solve(std::span<const MollifiedSourceSpec> sources, const InitialField& u0,
                     const KernelParams& p, std::span<const double> x, double t,
                     const QuadratureSpec& q, ConvolutionMode mode) {
  if (!(t > 0.0)) throw DomainError("duhamel_solve: t must be positive");
  p.validate();
  q.validate();
  if (x.size() != static_cast<std::size_t>(p.dim)) throw InputError("duhamel_solve: dimension mismatch");
  const double value = duhamel_at(sources, u0, p, x, t, q, mode);
  QuadratureSpec finer = q;
  finer.time_points *= 2;
  finer.space_points *= 2;
  const double check = duhamel_at(sources, u0, p, x, t, finer, mode);
  if (std::abs(check - value) > 1e-4 * std::abs(check) + 1e-14) {
    throw AccuracyError("duhamel_solve: quadrature refinement changed the value by more than 1e-4");
  }
  return value;
}

std::vector<double> duhamel_gradient(std::span<const MollifiedSourceSpec> sources,
                                     const InitialField& u0, const KernelParams& p,
                                     std::span<const double> x, double t,
                                     const QuadratureSpec& q) {
  if (!(t > 0.0)) throw DomainError("duhamel_gradient: t must be positive");
  p.validate();
  const auto d = static_cast<std::size_t>(p.dim);
  std::vector<double> total(d, 0.0);
  std::vector<double> part(d, 0.0);
  evolve_initial(u0, x, t, p, q, total);
  for (const auto& src : sources) {
    mollified_source_response(x, t, src.path, src.amplitude, src.epsilon, p, q,
                              ConvolutionMode::ClosedForm, part);
    for (std::size_t k = 0; k < d; ++k) total[k] += part[k];
  }
  return total;
}

double kernel_convolution(std::span<const double> x, double s, double t, const KernelParams& p,
                          std::size_t points_per_axis) {
  const auto d = static_cast<std::size_t>(p.dim);
  std::array<double, 3> centre{};
  std::array<double, 3> diff{};
  // The product of the two Gaussians concentrates around (s x)/(s + t).
  for (std::size_t k = 0; k < d; ++k) centre[k] = s * x[k] / (s + t);
  const double halfwidth = 8.0 * std::sqrt(4.0 * p.D * s * t / (s + t));
  auto integrand = [&](std::span<const double> y) {
    for (std::size_t k = 0; k < d; ++k) diff[k] = x[k] - y[k];
    return heat_kernel_eval(y, s, p) * heat_kernel_eval(std::span<const double>(diff.data(), d), t, p);
  };
  return integrate_box(integrand, std::span<const double>(centre.data(), d), halfwidth, p.dim,
                       points_per_axis);
}

double integrate_box(const SpatialSampler& f, std::span<const double> centre, double halfwidth,
                     int dim, std::size_t points_per_axis, std::size_t panels_per_axis) {
  const Rule& rule = gauss_legendre(points_per_axis);
  const std::size_t n_axis = panels_per_axis * rule.nodes.size();
  std::vector<double> nodes(n_axis);
  std::vector<double> weights(n_axis);
  const double width = 2.0 * halfwidth / static_cast<double>(panels_per_axis);
  for (std::size_t p = 0; p < panels_per_axis; ++p) {
    const double mid = -halfwidth + (static_cast<double>(p) + 0.5) * width;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      nodes[p * rule.nodes.size() + k] = mid + 0.5 * width * rule.nodes[k];
      weights[p * rule.nodes.size() + k] = 0.5 * width * rule.weights[k];
    }
  }
  const auto d = static_cast<std::size_t>(dim);
  std::array<std::size_t, 3> idx{};
  std::array<double, 3> y{};
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      y[k] = centre[k] + nodes[idx[k]];
      w *= weights[idx[k]];
    }
    total += w * f(std::span<const double>(y.data(), d));
    std::size_t k = 0;
    while (k < d && ++idx[k] == n_axis) idx[k++] = 0;
    if (k == d) break;
  }
  return total;
}

}  // namespace neurowire
