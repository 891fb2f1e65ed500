#pragma once

#include <span>
#include <vector>

#include "neurowire/quadrature.hpp"

namespace neurowire {

/// Free-space kernel of  u_t - D Δu + λu = 0  in R^dim.
struct KernelParams {
  double D = 1.0;
  double lambda = 0.0;
  int dim = 2;

  /// Throws DomainError unless D > 0, lambda >= 0 and dim in {1, 2, 3}.
  void validate() const;
};

/// (4πDt)^{-dim/2} exp(-|x|²/(4Dt) - λt). Throws DomainError for t <= 0.
double heat_kernel_eval(std::span<const double> x, double t, const KernelParams& p);

/// -x/(2Dt) · Φ(x, t), written into `out` (size dim).
void heat_kernel_grad(std::span<const double> x, double t, const KernelParams& p,
                      std::span<double> out);
std::vector<double> heat_kernel_grad(std::span<const double> x, double t, const KernelParams& p);

/// E|N(0, I_dim)|, the mean Euclidean norm of a standard normal vector.
double mean_standard_normal_norm(int dim);

/// ∫_0^t ∫ |∇Φ(z, τ)| dz dτ by radial quadrature in space and τ = σ² in time.
/// The value is computed at `q` and at doubled resolution; if the two differ
/// by more than 1e-4 (relative) an AccuracyError is thrown.
double grad_l1_integral(double t, const KernelParams& p, const QuadratureSpec& q = {});

/// Reduced one-dimensional form of the same integral,
///   (2D)^{-1/2} E|N| ∫_0^t τ^{-1/2} e^{-λτ} dτ,
/// evaluated in closed form with erf.
double grad_l1_reduced(double t, const KernelParams& p);

/// Smallest C with grad_l1_integral(t) <= C √t for every t and λ >= 0:
/// 2 E|N| / sqrt(2D). It depends on D as well as on the dimension.
double grad_l1_bound_constant(int dim, double D);

}  // namespace neurowire
