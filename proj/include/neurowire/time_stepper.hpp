#pragma once

#include <Eigen/Dense>
#include <memory>

#include "neurowire/fem.hpp"
#include "neurowire/grid.hpp"

namespace neurowire {

/// How (M + Δt B) is factorised.
enum class SolverBackend {
  /// Diagonalisation by 2-D FFT; exact for the translation-invariant
  /// periodic operators assembled here.
  Circulant,
  /// Sparse LDLᵀ (general symmetric positive definite matrices).
  SparseCholesky,
};

/// Implicit Euler for  M q' + B q = f:  (M + Δt B) q⁺ = M q + Δt f.
/// The factorisation is computed once and reused for every step.
class ImplicitEulerStepper {
 public:
  ImplicitEulerStepper(const PeriodicGrid& grid, SparseMatrix mass, SparseMatrix stiffness,
                       double dt, SolverBackend backend = SolverBackend::Circulant);
  ~ImplicitEulerStepper();
  ImplicitEulerStepper(ImplicitEulerStepper&&) noexcept;
  ImplicitEulerStepper& operator=(ImplicitEulerStepper&&) noexcept;

  double dt() const { return dt_; }
  const SparseMatrix& system_matrix() const { return system_; }
  const SparseMatrix& mass() const { return mass_; }

  /// Returns q⁺. When residual checking is on, a relative residual above
  /// 1e-10 throws NumericError.
  Eigen::VectorXd step(const Eigen::VectorXd& q, const Eigen::VectorXd& f) const;

  /// Solves (M + Δt B) x = rhs.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  void set_residual_check(bool on) { check_residual_ = on; }
  double last_relative_residual() const { return last_residual_; }

 private:
  struct Impl;
  SparseMatrix mass_;
  SparseMatrix system_;
  double dt_;
  bool check_residual_ = true;
  mutable double last_residual_ = 0.0;
  std::unique_ptr<Impl> impl_;
};

/// ‖q‖_M = sqrt(qᵀ M q).
double mass_norm(const SparseMatrix& mass, const Eigen::VectorXd& q);

}  // namespace neurowire
