#pragma once

#include <Eigen/Sparse>
#include <span>
#include <vector>

#include "neurowire/grid.hpp"

namespace neurowire {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Diffusion and decay of one chemical species.
struct SpeciesParams {
  double D = 1.0;
  double lambda = 1.0;

  friend bool operator==(const SpeciesParams&, const SpeciesParams&) = default;
};

/// λ = 0 is only meaningful for conservation tests.
enum class DecayPolicy { RequirePositive, AllowZero };

/// Consistent P1 mass matrix M_jk = ∫ v_j v_k.
SparseMatrix assemble_mass(const PeriodicGrid& grid);

/// P1 Laplacian stiffness K_jk = ∫ ∇v_j · ∇v_k.
SparseMatrix assemble_laplacian(const PeriodicGrid& grid);

/// B = D K + λ M. Throws DomainError for D <= 0 or λ <= 0 (λ < 0 under AllowZero).
SparseMatrix assemble_stiffness(const PeriodicGrid& grid, double D, double lambda,
                                DecayPolicy policy = DecayPolicy::RequirePositive);

/// η_ε(x) = (4πε)^{-1} exp(-|x|²/(4ε)).
struct Mollifier {
  double epsilon = 0.01;

  double operator()(Vec2 x) const;
};

/// A walker emitting with the given amplitude; inactive sources are skipped.
struct PointSource {
  Vec2 position;
  double amplitude = 0.0;
  bool active = true;
};

/// Load vectors ∫ η_ε(x - X) v_k(x) dx with η_ε replicated over the 3×3 lattice
/// of periodic images, integrated by a 7-point rule on every triangle.
class SourceAssembler {
 public:
  SourceAssembler(const PeriodicGrid& grid, Mollifier mollifier);

  const PeriodicGrid& grid() const { return grid_; }
  const Mollifier& mollifier() const { return mollifier_; }

  /// Adds scale[i] · ∫ η_ε(x - X) v_k to out[i][k] for every species i.
  void accumulate(Vec2 position, std::span<const double> scale,
                  std::span<Eigen::VectorXd> out) const;

  /// Unit-amplitude load vector of a single source.
  Eigen::VectorXd unit_load(Vec2 position) const;

 private:
  const PeriodicGrid& grid_;
  Mollifier mollifier_;
  // Reference-cell offsets (ξ, η) of the 7 quadrature points for both
  // triangle kinds, and the basis weights at those points.
  std::array<std::array<double, 7>, 2> qx_{};
  std::array<std::array<double, 7>, 2> qy_{};
  std::array<std::array<std::array<double, 3>, 7>, 2> basis_{};
  std::array<double, 7> qw_{};
};

/// f_k = Σ_j a_j ∫ η_ε(x - X_j) v_k(x) dx over active sources.
Eigen::VectorXd assemble_source(const PeriodicGrid& grid, const Mollifier& mollifier,
                                std::span<const PointSource> sources);

}  // namespace neurowire
