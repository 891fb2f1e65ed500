#include "neurowire/kernel.hpp"

#include <cmath>
#include <numbers>

#include "neurowire/errors.hpp"

namespace neurowire {

using std::numbers::pi;

void KernelParams::validate() const {
  if (!(D > 0.0)) throw DomainError("kernel: D must be positive");
  if (!(lambda >= 0.0)) throw DomainError("kernel: lambda must be non-negative");
  if (dim < 1 || dim > 3) throw DomainError("kernel: dim must be 1, 2 or 3");
}

namespace {

double squared_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

void check_time(double t) {
  if (!(t > 0.0)) throw DomainError("heat kernel: t must be positive");
}

double radial_profile(double r2, double t, const KernelParams& p) {
  return std::pow(4.0 * pi * p.D * t, -0.5 * p.dim) *
         std::exp(-r2 / (4.0 * p.D * t) - p.lambda * t);
}

double sphere_area(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * pi;
    default: return 4.0 * pi;
  }
}

double grad_l1_at(double t, const KernelParams& p, std::size_t space_points,
                  std::size_t time_points, QuadratureScheme scheme) {
  const Rule space_rule = make_rule(scheme, space_points);
  const Rule time_rule = make_rule(scheme, time_points);
  // Spatial truncation scales with the kernel width at each τ.
  auto spatial = [&](double tau) {
    const double radius = 8.0 * std::sqrt(4.0 * p.D * tau);
    auto radial = [&](double r) {
      const double grad = r / (2.0 * p.D * tau) * radial_profile(r * r, tau, p);
      return std::pow(r, p.dim - 1) * grad;
    };
    return sphere_area(p.dim) * integrate_composite(radial, 0.0, radius, 4, space_rule);
  };
  auto in_sigma = [&](double sigma) {
    if (sigma <= 0.0) return 0.0;
    return 2.0 * sigma * spatial(sigma * sigma);
  };
  return integrate_composite(in_sigma, 0.0, std::sqrt(t), 4, time_rule);
}

}  // namespace

double heat_kernel_eval(std::span<const double> x, double t, const KernelParams& p) {
  check_time(t);
  p.validate();
  if (x.size() != static_cast<std::size_t>(p.dim)) throw InputError("heat kernel: dimension mismatch");
  return radial_profile(squared_norm(x), t, p);
}

void heat_kernel_grad(std::span<const double> x, double t, const KernelParams& p,
                      std::span<double> out) {
  const double phi = heat_kernel_eval(x, t, p);
  const double scale = -phi / (2.0 * p.D * t);
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = scale * x[k];
}

std::vector<double> heat_kernel_grad(std::span<const double> x, double t, const KernelParams& p) {
  std::vector<double> out(x.size());
  heat_kernel_grad(x, t, p, out);
  return out;
}

double mean_standard_normal_norm(int dim) {
  switch (dim) {
    case 1: return std::sqrt(2.0 / pi);
    case 2: return std::sqrt(pi / 2.0);
    case 3: return 2.0 * std::sqrt(2.0 / pi);
    default: throw DomainError("mean_standard_normal_norm: dim must be 1, 2 or 3");
  }
}

double grad_l1_integral(double t, const KernelParams& p, const QuadratureSpec& q) {
  check_time(t);
  p.validate();
  q.validate();
  const double coarse = grad_l1_at(t, p, q.space_points, q.time_points, q.scheme);
  const double fine = grad_l1_at(t, p, 2 * q.space_points, 2 * q.time_points, q.scheme);
  if (std::abs(fine - coarse) > 1e-4 * std::abs(fine)) {
    throw AccuracyError("grad_l1_integral: refinement changed the value by more than 1e-4");
  }
  return fine;
}

double grad_l1_reduced(double t, const KernelParams& p) {
  check_time(t);
  p.validate();
  const double time_part = p.lambda > 0.0
                               ? std::sqrt(pi / p.lambda) * std::erf(std::sqrt(p.lambda * t))
                               : 2.0 * std::sqrt(t);
  return mean_standard_normal_norm(p.dim) / std::sqrt(2.0 * p.D) * time_part;
}

double grad_l1_bound_constant(int dim, double D) {
  if (!(D > 0.0)) throw DomainError("grad_l1_bound_constant: D must be positive");
  return 2.0 * mean_standard_normal_norm(dim) / std::sqrt(2.0 * D);
}

}  // namespace neurowire
