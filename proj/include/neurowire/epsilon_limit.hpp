#pragma once

#include <cstddef>
#include <vector>

#include "neurowire/grid.hpp"
#include "neurowire/quadrature.hpp"
#include "neurowire/sampled_path.hpp"

namespace neurowire {

/// Walker driven by its own trail and a constant force (u, 0):
///   X' = ∇c_ε(X, t) + F,  c_ε = a ∫₀ᵗ Φ_{1,0}(x − X(s), t − s + ε) ds.
struct DeterministicState {
  SampledPath history{2};
  double epsilon = 0.05;
  double amplitude = 1.0;
  double force = 1.0;
  double y0 = 0.0;

  /// Rest at (x0, y0) at time 0.
  static DeterministicState at_rest(double x0, double y0, double epsilon, double amplitude,
                                    double force);
  void validate() const;
  double time() const { return history.end_time(); }
  Vec2 position() const;
};

/// −(a/8π) ∫_ε^{t+ε} τ⁻² (X(t) − X(t+ε−τ)) exp(−|X(t) − X(t+ε−τ)|²/(4τ)) dτ,
/// on graded Gauss–Legendre panels (q.time_points nodes each).
Vec2 closed_form_gradient(const DeterministicState& state, double t, const QuadratureSpec& q = {});

/// Explicit Euler step from the end of the history; appends X(t + dt).
Vec2 deterministic_step(DeterministicState& state, double dt, const QuadratureSpec& q = {});

struct DeterministicTrace {
  std::vector<double> times;
  std::vector<double> x;
  std::vector<double> y;
  /// (X¹(t_{k+1}) − X¹(t_k)) / dt, one entry per step.
  std::vector<double> speed;
};

DeterministicTrace simulate_deterministic(DeterministicState state, double t_end, double dt,
                                          const QuadratureSpec& q = {});

/// Mean speed over the last `window` time units of a trace.
double late_time_speed(const DeterministicTrace& trace, double window);

struct AsymptoticSpeedResult {
  double v_eps = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;
  /// Value of ∫_ε^∞ ((τ−ε)/τ²) exp(−v²(τ−ε)²/(4τ)) dτ at v_eps.
  double trail_integral = 0.0;
  /// Upper end of the substituted tail after truncation.
  double tail_cutoff = 0.0;
  std::size_t integrand_evaluations = 0;
};

struct AsymptoticSpeedOptions {
  double tol = 1e-12;
  std::size_t max_iterations = 10000;
  std::size_t points_per_panel = 16;
};

/// ∫_ε^∞ ((τ−ε)/τ²) exp(−v²(τ−ε)²/(4τ)) dτ for v > 0.
double trail_integral(double v, double epsilon, std::size_t points_per_panel = 16,
                      double* tail_cutoff = nullptr, std::size_t* evaluations = nullptr);

/// G(v) = u / (1 + (a/8π) trail_integral(v, ε)).
double speed_map(double v, double epsilon, double a, double u, std::size_t points_per_panel = 16);

/// Fixed point of G by the averaged iteration v ← (v + G(v))/2 from v = u.
AsymptoticSpeedResult asymptotic_speed(double epsilon, double a, double u,
                                       const AsymptoticSpeedOptions& options = {});

struct SweepRow {
  double epsilon = 0.0;
  double v_eps = 0.0;
  double residual = 0.0;
};

std::vector<SweepRow> sweep_epsilon(const std::vector<double>& eps_list, double a, double u,
                                    const AsymptoticSpeedOptions& options = {});

/// True when the rows sorted by ε have strictly increasing v_ε.
bool sweep_is_monotone(std::vector<SweepRow> rows);

}  // namespace neurowire
