#include "neurowire/time_stepper.hpp"

#include <fftw3.h>

#include <Eigen/SparseCholesky>
#include <cmath>
#include <complex>
#include <mutex>

#include "neurowire/errors.hpp"

namespace neurowire {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class CirculantSolver {
 public:
  CirculantSolver(std::size_t n, const Eigen::VectorXd& first_column) : n_(n) {
    const std::size_t half = n / 2 + 1;
    real_ = fftw_alloc_real(n * n);
    spectrum_ = fftw_alloc_complex(n * half);
    {
      std::lock_guard lock(planner_mutex());
      forward_ = fftw_plan_dft_r2c_2d(static_cast<int>(n), static_cast<int>(n), real_, spectrum_, FFTW_ESTIMATE);
      backward_ = fftw_plan_dft_c2r_2d(static_cast<int>(n), static_cast<int>(n), spectrum_, real_, FFTW_ESTIMATE);
    }
    std::copy(first_column.data(), first_column.data() + n * n, real_);
    fftw_execute(forward_);
    inverse_eigenvalues_.resize(n * half);
    for (std::size_t k = 0; k < n * half; ++k) {
      // Symmetric stencil: the spectrum is real.
      const double lambda = spectrum_[k][0];
      if (!(lambda > 0.0)) throw NumericError("circulant solver: operator is not positive definite");
      inverse_eigenvalues_[k] = 1.0 / (lambda * static_cast<double>(n * n));
    }
  }

  ~CirculantSolver() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(real_);
    fftw_free(spectrum_);
  }

  CirculantSolver(const CirculantSolver&) = delete;
  CirculantSolver& operator=(const CirculantSolver&) = delete;

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) {
    std::lock_guard lock(buffer_mutex_);
    std::copy(rhs.data(), rhs.data() + rhs.size(), real_);
    fftw_execute(forward_);
    const std::size_t count = n_ * (n_ / 2 + 1);
    for (std::size_t k = 0; k < count; ++k) {
      spectrum_[k][0] *= inverse_eigenvalues_[k];
      spectrum_[k][1] *= inverse_eigenvalues_[k];
    }
    fftw_execute(backward_);
    Eigen::VectorXd out(rhs.size());
    std::copy(real_, real_ + rhs.size(), out.data());
    return out;
  }

 private:
  std::size_t n_;
  double* real_ = nullptr;
  fftw_complex* spectrum_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
  std::vector<double> inverse_eigenvalues_;
  std::mutex buffer_mutex_;
};

}  // namespace

struct ImplicitEulerStepper::Impl {
  std::unique_ptr<CirculantSolver> circulant;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  bool use_ldlt = false;
};

ImplicitEulerStepper::ImplicitEulerStepper(const PeriodicGrid& grid, SparseMatrix mass,
                                           SparseMatrix stiffness, double dt, SolverBackend backend)
    : mass_(std::move(mass)), dt_(dt), impl_(std::make_unique<Impl>()) {
  if (!(dt > 0.0)) throw DomainError("implicit Euler: dt must be positive");
  system_ = mass_ + dt * stiffness;
  system_.makeCompressed();
  if (backend == SolverBackend::Circulant) {
    // Node 0's column holds the stencil a(d) with A[r, c] = a(r - c).
    Eigen::VectorXd column = system_.col(0);
    impl_->circulant = std::make_unique<CirculantSolver>(grid.cells_per_axis(), column);
  } else {
    impl_->use_ldlt = true;
    impl_->ldlt.compute(system_);
    if (impl_->ldlt.info() != Eigen::Success) {
      throw NumericError("implicit Euler: factorisation failed (system matrix not SPD)");
    }
  }
}

ImplicitEulerStepper::~ImplicitEulerStepper() = default;
ImplicitEulerStepper::ImplicitEulerStepper(ImplicitEulerStepper&&) noexcept = default;
ImplicitEulerStepper& ImplicitEulerStepper::operator=(ImplicitEulerStepper&&) noexcept = default;

Eigen::VectorXd ImplicitEulerStepper::solve(const Eigen::VectorXd& rhs) const {
  if (impl_->use_ldlt) return impl_->ldlt.solve(rhs);
  return impl_->circulant->solve(rhs);
}

Eigen::VectorXd ImplicitEulerStepper::step(const Eigen::VectorXd& q, const Eigen::VectorXd& f) const {
  Eigen::VectorXd rhs = mass_ * q + dt_ * f;
  Eigen::VectorXd next = solve(rhs);
  if (check_residual_) {
    const double scale = rhs.norm();
    last_residual_ = scale > 0.0 ? (system_ * next - rhs).norm() / scale : (system_ * next).norm();
    if (!(last_residual_ < 1e-10)) {
      throw NumericError("implicit Euler: linear solve residual above 1e-10");
    }
  }
  return next;
}

double mass_norm(const SparseMatrix& mass, const Eigen::VectorXd& q) {
  return std::sqrt(q.dot(mass * q));
}

}  // namespace neurowire
