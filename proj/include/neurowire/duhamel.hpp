#pragma once

#include <functional>
#include <span>
#include <vector>

#include "neurowire/kernel.hpp"
#include "neurowire/quadrature.hpp"
#include "neurowire/sampled_path.hpp"

namespace neurowire {

using Amplitude = std::function<double(double)>;
using SpatialSampler = std::function<double(std::span<const double>)>;

/// f(s) η_ε(x - ξ(s)) with η_ε the unit-mass Gaussian of variance 2ε per axis.
struct MollifiedSourceSpec {
  Amplitude amplitude;
  SampledPath path;
  double epsilon = 0.01;
};

/// Initial datum u0 of the free-space problem.
class InitialField {
 public:
  enum class Kind { Zero, Constant, Sampled };

  static InitialField zero() { return InitialField(Kind::Zero, 0.0, {}); }
  static InitialField constant(double value) { return InitialField(Kind::Constant, value, {}); }
  static InitialField sampled(SpatialSampler f) { return InitialField(Kind::Sampled, 0.0, std::move(f)); }

  Kind kind() const { return kind_; }
  double constant_value() const { return value_; }
  double operator()(std::span<const double> x) const;

 private:
  InitialField(Kind kind, double value, SpatialSampler f)
      : kind_(kind), value_(value), sampler_(std::move(f)) {}

  Kind kind_;
  double value_;
  SpatialSampler sampler_;
};

/// How η_ε * Φ_{D,λ}(·, τ) is evaluated inside the time integral.
enum class ConvolutionMode {
  /// Exact Gaussian identity: e^{-λτ} Φ_{1,0}(·, Dτ + ε).
  ClosedForm,
  /// Tensor-product quadrature over a box around the product's centre.
  Quadrature,
};

/// Time panels for ∫_0^t ... ds, graded towards s = t where the integrand
/// varies on the scale ε/D.
std::vector<double> history_panels(double t, double epsilon, double D);

/// ∫_0^t f(s) (η_ε * Φ)(x - ξ(s), t - s) ds for one source. `grad`, when
/// non-empty, receives the x-gradient of the same integral.
double mollified_source_response(std::span<const double> x, double t, const SampledPath& path,
                                 const Amplitude& amplitude, double epsilon,
                                 const KernelParams& p, const QuadratureSpec& q,
                                 ConvolutionMode mode = ConvolutionMode::ClosedForm,
                                 std::span<double> grad = {});

/// (u0 * Φ(·, t))(x); constants are propagated exactly as c·e^{-λt}.
double evolve_initial(const InitialField& u0, std::span<const double> x, double t,
                      const KernelParams& p, const QuadratureSpec& q,
                      std::span<double> grad = {});

/// Free-space solution of  u_t - DΔu + λu = Σ_j f_j(t) η_ε(x - ξ_j(t)),  u(0) = u0.
/// The result at `q` is checked against doubled time resolution; a relative
/// change above 1e-4 raises AccuracyError.
double duhamel_solve(std::span<const MollifiedSourceSpec> sources, const InitialField& u0,
                     const KernelParams& p, std::span<const double> x, double t,
                     const QuadratureSpec& q = {},
                     ConvolutionMode mode = ConvolutionMode::ClosedForm);

/// Spatial gradient of the same solution (no refinement check).
std::vector<double> duhamel_gradient(std::span<const MollifiedSourceSpec> sources,
                                     const InitialField& u0, const KernelParams& p,
                                     std::span<const double> x, double t,
                                     const QuadratureSpec& q = {});

/// (Φ_{D,λ}(·, s) * Φ_{D,λ}(·, t))(x) by tensor quadrature; used to check
/// the semigroup identity.
double kernel_convolution(std::span<const double> x, double s, double t, const KernelParams& p,
                          std::size_t points_per_axis = 96);

/// ∫_{[-H, H]^dim} f(y) dy by tensor Gauss-Legendre around `centre`.
double integrate_box(const SpatialSampler& f, std::span<const double> centre, double halfwidth,
                     int dim, std::size_t points_per_axis, std::size_t panels_per_axis = 4);

}  // namespace neurowire
