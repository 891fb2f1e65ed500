#pragma once

#include <functional>
#include <span>
#include <vector>

#include "neurowire/duhamel.hpp"
#include "neurowire/kernel.hpp"
#include "neurowire/quadrature.hpp"
#include "neurowire/sampled_path.hpp"

namespace neurowire {

/// a_{ij}(c, t): emission of species i by path j given all concentrations c at
/// the path position.
using EmissionFn = std::function<double(std::span<const double> c, double t)>;

/// emission[i][j] for species i and path j.
using EmissionTable = std::vector<std::vector<EmissionFn>>;

struct PicardOptions {
  double tol = 1e-8;
  int max_iterations = 200;
  /// Number of time nodes (including t = 0) on which u(ξ_j(t), t) is sampled.
  std::size_t time_nodes = 81;
  QuadratureSpec quadrature{};
};

/// Convergence record for one continuation window.
struct PicardWindow {
  double t_begin = 0.0;
  double t_end = 0.0;
  int iterations = 0;
  /// Sup-norm difference between successive iterates.
  std::vector<double> differences;
  /// Largest ratio differences[k+1]/differences[k] over the converged run.
  double contraction = 0.0;
};

/// Self-consistent solution of the nonlinear source problem for fixed paths.
/// Amplitudes between time nodes are interpolated linearly.
class PicardField {
 public:
  PicardField(std::vector<KernelParams> species, std::vector<SampledPath> paths,
              std::vector<InitialField> initial, double epsilon, std::vector<double> node_times,
              QuadratureSpec quadrature);

  std::size_t species_count() const { return species_.size(); }
  std::size_t path_count() const { return paths_.size(); }
  const std::vector<SampledPath>& paths() const { return paths_; }
  const std::vector<double>& node_times() const { return node_times_; }
  double epsilon() const { return epsilon_; }

  /// u_i(x, t) through the Duhamel representation with the converged amplitudes.
  double value(std::size_t species, std::span<const double> x, double t) const;
  std::vector<double> gradient(std::size_t species, std::span<const double> x, double t) const;

  /// Stored samples u_i(ξ_j(t_k), t_k).
  double path_sample(std::size_t species, std::size_t path, std::size_t node) const;
  /// Stored amplitudes a_{ij}(u(ξ_j(t_k), t_k), t_k).
  double amplitude_sample(std::size_t species, std::size_t path, std::size_t node) const;

  const std::vector<PicardWindow>& windows() const { return windows_; }

  /// Applies the Duhamel map once to the stored samples and returns
  /// max |F(u) - u| over all path samples.
  double self_consistency_residual() const;

 private:
  friend PicardField picard_solve(const EmissionTable&, const std::vector<SampledPath>&,
                                  const std::vector<InitialField>&,
                                  const std::vector<KernelParams>&, double, double,
                                  const PicardOptions&);

  std::size_t flat(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * paths_.size() + j) * node_times_.size() + k;
  }
  double interpolated_amplitude(std::size_t i, std::size_t j, double s) const;
  double map_value(std::size_t i, std::size_t j, std::size_t k) const;

  std::vector<KernelParams> species_;
  std::vector<SampledPath> paths_;
  std::vector<InitialField> initial_;
  double epsilon_;
  std::vector<double> node_times_;
  QuadratureSpec quadrature_;
  std::vector<double> samples_;
  std::vector<double> amplitudes_;
  std::vector<PicardWindow> windows_;
};

/// Fixed point of the Duhamel map whose source amplitudes are a_{ij}(u(ξ_j(s), s), s).
/// Iterates from the source-free evolution of `initial`. When a window fails to
/// contract it is halved and the solution continued window by window; a window
/// of a single time step that still fails raises ConvergenceError.
PicardField picard_solve(const EmissionTable& emission, const std::vector<SampledPath>& paths,
                         const std::vector<InitialField>& initial,
                         const std::vector<KernelParams>& species, double epsilon, double horizon,
                         const PicardOptions& options = {});

/// One comparison for lipschitz_probe: the same species of two solutions
/// (possibly the same object) at two points.
struct LipschitzPair {
  const PicardField* field = nullptr;
  const PicardField* field_bar = nullptr;
  std::vector<double> x;
  std::vector<double> x_bar;
};

struct LipschitzStats {
  double value_ratio_max = 0.0;
  double gradient_ratio_max = 0.0;
  std::size_t pairs = 0;
};

/// max over pairs of |u(x;ξ) - u(x̄;ξ̄)| / (|x - x̄| + ‖ξ - ξ̄‖_∞) and the same
/// ratio for ∇u. Throws InputError when a denominator vanishes.
LipschitzStats lipschitz_probe(std::span<const LipschitzPair> pairs, double t,
                               std::size_t species = 0);

}  // namespace neurowire
