#include "neurowire/epsilon_limit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "neurowire/errors.hpp"

namespace neurowire {

namespace {

// exp(-36.84) < 1e-16.
constexpr double kTailExponent = 36.84;

void check_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << name << " must be positive and finite, got " << value;
    throw DomainError(msg.str());
  }
}

}  // namespace

DeterministicState DeterministicState::at_rest(double x0, double y0, double epsilon, double amplitude,
                                               double force) {
  DeterministicState s;
  s.epsilon = epsilon;
  s.amplitude = amplitude;
  s.force = force;
  s.y0 = y0;
  const std::array<double, 2> p{x0, y0};
  s.history.append(0.0, p);
  s.validate();
  return s;
}

void DeterministicState::validate() const {
  check_positive(epsilon, "epsilon");
  if (!(amplitude >= 0.0)) throw DomainError("amplitude must be nonnegative");
  check_positive(force, "force");
  if (history.dim() != 2 || history.empty()) throw InputError("history must be a non-empty planar path");
}

Vec2 DeterministicState::position() const {
  const auto p = history.point(history.size() - 1);
  return {p[0], p[1]};
}

Vec2 closed_form_gradient(const DeterministicState& state, double t, const QuadratureSpec& q) {
  q.validate();
  if (!(t >= 0.0)) throw DomainError("closed_form_gradient: t must be nonnegative");
  if (!state.history.covers(0.0, t)) {
    std::ostringstream msg;
    msg << "closed_form_gradient: history does not cover [0, " << t << "]";
    throw InputError(msg.str());
  }
  if (t == 0.0 || state.amplitude == 0.0) return {0.0, 0.0};
  const double eps = state.epsilon;
  std::array<double, 2> xt{};
  std::array<double, 2> xs{};
  state.history.evaluate(t, xt);

  const Rule& rule = gauss_legendre(q.time_points);
  const auto edges = graded_edges(t, 0.25 * eps, 2.0, std::max(1.0, eps));
  double gx = 0.0;
  double gy = 0.0;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double half = 0.5 * (edges[p + 1] - edges[p]);
    const double mid = 0.5 * (edges[p + 1] + edges[p]);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double r = mid + half * rule.nodes[k];  // τ − ε
      const double tau = r + eps;
      state.history.evaluate(t - r, xs);
      const double dx = xt[0] - xs[0];
      const double dy = xt[1] - xs[1];
      const double w = half * rule.weights[k] * std::exp(-(dx * dx + dy * dy) / (4.0 * tau)) / (tau * tau);
      gx += w * dx;
      gy += w * dy;
    }
  }
  const double pre = -state.amplitude / (8.0 * std::numbers::pi);
  return {pre * gx, pre * gy};
}

Vec2 deterministic_step(DeterministicState& state, double dt, const QuadratureSpec& q) {
  if (!(dt > 0.0)) throw DomainError("deterministic_step: dt must be positive");
  const double t = state.time();
  const Vec2 g = closed_form_gradient(state, t, q);
  const Vec2 x = state.position();
  const std::array<double, 2> next{x.x + (g.x + state.force) * dt, x.y + g.y * dt};
  state.history.append(t + dt, next);
  return {next[0], next[1]};
}

DeterministicTrace simulate_deterministic(DeterministicState state, double t_end, double dt,
                                          const QuadratureSpec& q) {
  state.validate();
  if (!(dt > 0.0)) throw DomainError("simulate_deterministic: dt must be positive");
  const double t0 = state.time();
  const auto steps = static_cast<std::size_t>(std::llround((t_end - t0) / dt));
  DeterministicTrace trace;
  trace.times.reserve(steps + 1);
  Vec2 x = state.position();
  trace.times.push_back(t0);
  trace.x.push_back(x.x);
  trace.y.push_back(x.y);
  for (std::size_t k = 0; k < steps; ++k) {
    const Vec2 next = deterministic_step(state, dt, q);
    trace.speed.push_back((next.x - x.x) / dt);
    x = next;
    trace.times.push_back(state.time());
    trace.x.push_back(x.x);
    trace.y.push_back(x.y);
  }
  return trace;
}

double late_time_speed(const DeterministicTrace& trace, double window) {
  if (trace.times.size() < 2) throw InputError("late_time_speed: trace has no steps");
  const double t_end = trace.times.back();
  const auto it = std::lower_bound(trace.times.begin(), trace.times.end(), t_end - window);
  auto i = static_cast<std::size_t>(it - trace.times.begin());
  if (i + 1 >= trace.times.size()) i = trace.times.size() - 2;
  return (trace.x.back() - trace.x[i]) / (t_end - trace.times[i]);
}

double trail_integral(double v, double epsilon, std::size_t points_per_panel, double* tail_cutoff,
                      std::size_t* evaluations) {
  check_positive(v, "v");
  check_positive(epsilon, "epsilon");
  const Rule& rule = gauss_legendre(points_per_panel);
  std::size_t count = 0;
  auto integrand = [&](double tau) {
    ++count;
    const double r = tau - epsilon;
    return r / (tau * tau) * std::exp(-v * v * r * r / (4.0 * tau));
  };

  // Head: τ ∈ [ε, split], graded towards ε.
  const double split = std::max(1.0, 10.0 * epsilon);
  const auto edges = graded_edges(split - epsilon, 0.25 * epsilon, 2.0, 0.25);
  double head = 0.0;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    head += integrate_composite([&](double r) { return integrand(r + epsilon); }, edges[p], edges[p + 1], 1, rule);
  }

  // Tail: τ = e^σ, stopped where the exponential factor is below 1e-16.
  auto exponent = [&](double tau) {
    const double r = tau - epsilon;
    return v * v * r * r / (4.0 * tau);
  };
  double tau_max = 2.0 * split;
  while (exponent(tau_max) < kTailExponent) tau_max *= 2.0;
  const double s0 = std::log(split);
  const double s1 = std::log(tau_max);
  const auto panels = static_cast<std::size_t>(std::ceil((s1 - s0) / 0.25));
  const double tail = integrate_composite(
      [&](double s) {
        const double tau = std::exp(s);
        return integrand(tau) * tau;
      },
      s0, s1, std::max<std::size_t>(panels, 1), rule);
  if (tail_cutoff) *tail_cutoff = tau_max;
  if (evaluations) *evaluations += count;
  return head + tail;
}

double speed_map(double v, double epsilon, double a, double u, std::size_t points_per_panel) {
  if (a == 0.0) return u;
  return u / (1.0 + a / (8.0 * std::numbers::pi) * trail_integral(v, epsilon, points_per_panel));
}

AsymptoticSpeedResult asymptotic_speed(double epsilon, double a, double u,
                                       const AsymptoticSpeedOptions& options) {
  check_positive(epsilon, "epsilon");
  check_positive(u, "u");
  check_positive(options.tol, "tol");
  if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("asymptotic_speed: a must be nonnegative");
  AsymptoticSpeedResult result;
  double v = u;
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    const double g = speed_map(v, epsilon, a, u, options.points_per_panel);
    result.iterations = it;
    result.residual = std::abs(v - g);
    if (result.residual < options.tol) {
      result.v_eps = v;
      if (a > 0.0) {
        result.trail_integral = trail_integral(v, epsilon, options.points_per_panel, &result.tail_cutoff,
                                               &result.integrand_evaluations);
      }
      return result;
    }
    v = 0.5 * (v + g);
  }
  std::ostringstream msg;
  msg << "asymptotic_speed: no convergence after " << options.max_iterations
      << " iterations (residual " << result.residual << ")";
  throw ConvergenceError(msg.str(), std::numeric_limits<double>::quiet_NaN());
}

std::vector<SweepRow> sweep_epsilon(const std::vector<double>& eps_list, double a, double u,
                                    const AsymptoticSpeedOptions& options) {
  if (eps_list.empty()) throw InputError("sweep_epsilon: empty epsilon list");
  std::vector<SweepRow> rows;
  for (double eps : eps_list) {
    check_positive(eps, "epsilon");
    const auto r = asymptotic_speed(eps, a, u, options);
    rows.push_back({eps, r.v_eps, r.residual});
  }
  return rows;
}

bool sweep_is_monotone(std::vector<SweepRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const SweepRow& l, const SweepRow& r) { return l.epsilon < r.epsilon; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].v_eps > rows[i - 1].v_eps)) return false;
  }
  return true;
}

}  // namespace neurowire
