#include "neurowire/validation.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "neurowire/duhamel.hpp"
#include "neurowire/epsilon_limit.hpp"
#include "neurowire/errors.hpp"
#include "neurowire/fem.hpp"
#include "neurowire/field.hpp"
#include "neurowire/io/output.hpp"
#include "neurowire/kernel.hpp"
#include "neurowire/picard.hpp"
#include "neurowire/rng.hpp"
#include "neurowire/simulation.hpp"
#include "neurowire/time_stepper.hpp"
#include "neurowire/walker.hpp"

namespace neurowire {

namespace {

template <class... Args>
std::string fmt(const char* format, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

CheckResult finish(CheckResult r, const Timer& timer) {
  r.seconds = timer.seconds();
  if (r.budget_seconds > 0.0) {
    r.expect(r.seconds < r.budget_seconds, fmt("wall time %.2f s (budget %.0f s)", r.seconds, r.budget_seconds));
  }
  return r;
}

double uniform(RngStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.next_uniform(); }

// Stationary unit source at the origin and its 5×5 periodic images.
constexpr double kOracleEpsilon = 0.01;
constexpr double kOracleTime = 1.0;
constexpr double kOracleHalfLength = 3.0;

const std::array<Vec2, 10> kProbes{{{0.25, 0.0}, {0.5, 0.1}, {0.0, 0.75}, {1.0, 0.0}, {-1.0, 0.5},
                                    {0.7, 0.7}, {-0.4, -1.2}, {1.5, 0.3}, {0.1, -2.0}, {2.0, 1.0}}};

// u(r) of the free-space problem tabulated on a uniform radial grid and
// interpolated by cubic Lagrange polynomials; zero beyond the table.
class RadialProfile {
 public:
  RadialProfile(double step, double radius) : step_(step) {
    const SpeciesParams s{1.0, 1.0};
    MollifiedSourceSpec src;
    src.amplitude = [](double) { return 1.0; };
    const std::array<double, 2> origin{0.0, 0.0};
    src.path = SampledPath::stationary(origin, 0.0, kOracleTime);
    src.epsilon = kOracleEpsilon;
    const std::vector<MollifiedSourceSpec> sources{src};
    const KernelParams p{s.D, s.lambda, 2};
    const auto n = static_cast<std::size_t>(std::ceil(radius / step)) + 4;
    for (std::size_t i = 0; i < n; ++i) {
      const std::array<double, 2> x{static_cast<double>(i) * step, 0.0};
      values_.push_back(duhamel_solve(sources, InitialField::zero(), p, x, kOracleTime));
    }
  }

  double operator()(double r) const {
    const double s = r / step_;
    auto i = static_cast<std::size_t>(s);
    if (i + 3 >= values_.size()) return 0.0;
    if (i == 0) {
      // u is even in r; reflect for the left stencil point.
      const double t = s - 1.0;
      return lagrange(values_[2], values_[0], values_[1], values_[2], t + 1.0 - 1.0, s);
    }
    return lagrange(values_[i - 1], values_[i], values_[i + 1], values_[i + 2], s - static_cast<double>(i), s);
  }

  double periodic(Vec2 x) const {
    double sum = 0.0;
    const double period = 2.0 * kOracleHalfLength;
    for (int a = -2; a <= 2; ++a) {
      for (int b = -2; b <= 2; ++b) {
        const double dx = x.x - a * period;
        const double dy = x.y - b * period;
        sum += (*this)(std::sqrt(dx * dx + dy * dy));
      }
    }
    return sum;
  }

 private:
  static double lagrange(double a, double b, double c, double d, double t, double) {
    return b + 0.5 * t * (c - a + t * (2.0 * a - 5.0 * b + 4.0 * c - d + t * (3.0 * (b - c) + d - a)));
  }

  double step_;
  std::vector<double> values_;
};

struct SolverRun {
  PeriodicGrid grid;
  Eigen::VectorXd q;
};

SolverRun solve_stationary_source(double spacing, double dt) {
  SolverRun run{PeriodicGrid(kOracleHalfLength, spacing), {}};
  const SparseMatrix mass = assemble_mass(run.grid);
  ImplicitEulerStepper stepper(run.grid, mass, assemble_stiffness(run.grid, 1.0, 1.0), dt);
  const SourceAssembler sources(run.grid, Mollifier{kOracleEpsilon});
  const Eigen::VectorXd load = sources.unit_load({0.0, 0.0});
  run.q = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(run.grid.node_count()));
  const auto steps = static_cast<std::size_t>(std::llround(kOracleTime / dt));
  for (std::size_t k = 0; k < steps; ++k) run.q = stepper.step(run.q, load);
  return run;
}

std::vector<double> probe_values(const SolverRun& run) {
  FieldState s;
  s.coefficients = {run.q};
  std::vector<double> out;
  for (const auto& p : kProbes) out.push_back(eval_field(s, run.grid, p)[0]);
  return out;
}

// ‖u_h − u‖ / ‖u‖ over the domain with a 7-point rule per triangle.
double relative_l2_error(const SolverRun& run, const RadialProfile& exact) {
  static constexpr double kA = 0.059715871789770, kB = 0.470142064105115;
  static constexpr double kC = 0.797426985353087, kD = 0.101286507323456;
  static constexpr std::array<std::array<double, 3>, 7> bary{
      {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {kA, kB, kB}, {kB, kA, kB}, {kB, kB, kA}, {kC, kD, kD}, {kD, kC, kD}, {kD, kD, kC}}};
  static constexpr std::array<double, 7> w{0.225, 0.132394152788506, 0.132394152788506, 0.132394152788506,
                                          0.125939180544827, 0.125939180544827, 0.125939180544827};
  const auto& g = run.grid;
  double err = 0.0;
  double norm = 0.0;
  for (std::size_t e = 0; e < g.element_count(); ++e) {
    const auto nodes = g.element_nodes(e);
    const Vec2 p0 = g.node_position(nodes[0]);
    std::array<Vec2, 3> v{};
    for (int k = 0; k < 3; ++k) v[k] = p0 + g.minimal_image(g.node_position(nodes[k]) - p0);
    for (std::size_t k = 0; k < 7; ++k) {
      Vec2 x{0.0, 0.0};
      double uh = 0.0;
      for (int m = 0; m < 3; ++m) {
        x = x + bary[k][m] * v[m];
        uh += bary[k][m] * run.q[static_cast<Eigen::Index>(nodes[m])];
      }
      const double u = exact.periodic(x);
      err += w[k] * (uh - u) * (uh - u);
      norm += w[k] * u * u;
    }
  }
  return std::sqrt(err / norm);
}

double probe_error(const std::vector<double>& uh, const std::vector<double>& u) {
  double e = 0.0;
  double n = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    e += (uh[i] - u[i]) * (uh[i] - u[i]);
    n += u[i] * u[i];
  }
  return std::sqrt(e / n);
}

}  // namespace

void CheckResult::expect(bool ok, const std::string& note) {
  passed = passed && ok;
  notes.push_back(std::string(ok ? "ok   " : "FAIL ") + note);
}

CheckResult check_kernel_identities(std::uint64_t seed) {
  Timer timer;
  CheckResult r{"kernel identities", true, {}, 0.0, 1.0};
  RngStream rng{seed, 11, 0};

  double norm_worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const KernelParams p{uniform(rng, 0.2, 3.0), uniform(rng, 0.0, 3.0), 1 + k % 3};
    const double t = uniform(rng, 0.05, 3.0);
    const std::array<double, 3> centre{0.0, 0.0, 0.0};
    const double total = integrate_box([&](std::span<const double> y) { return heat_kernel_eval(y, t, p); },
                                       std::span<const double>(centre.data(), static_cast<std::size_t>(p.dim)),
                                       8.0 * std::sqrt(4.0 * p.D * t), p.dim, 16, 4);
    norm_worst = std::max(norm_worst, std::abs(total - std::exp(-p.lambda * t)));
  }
  r.expect(norm_worst < 1e-8, fmt("normalisation: max |int Phi - exp(-lambda t)| = %.2e over 10 draws (tol 1e-8)", norm_worst));

  double semi_worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const KernelParams p{uniform(rng, 0.3, 2.0), 0.0, 2};
    const std::array<double, 2> x{uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)};
    const double s = uniform(rng, 0.05, 1.0);
    const double t = uniform(rng, 0.05, 1.0);
    semi_worst = std::max(semi_worst, std::abs(kernel_convolution(x, s, t, p) - heat_kernel_eval(x, s + t, p)));
  }
  r.expect(semi_worst < 1e-6, fmt("semigroup: max |Phi(s) * Phi(t) - Phi(s+t)| = %.2e over 20 draws (tol 1e-6)", semi_worst));

  double fd_worst = 0.0;
  bool symmetric = true;
  constexpr double h = 1e-5;
  for (int k = 0; k < 20; ++k) {
    const KernelParams p{uniform(rng, 0.5, 2.0), uniform(rng, 0.0, 1.0), 2};
    const std::array<double, 2> x{uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)};
    const double t = uniform(rng, 0.1, 2.0);
    const auto g = heat_kernel_grad(x, t, p);
    std::array<double, 2> fd{};
    for (std::size_t a = 0; a < 2; ++a) {
      auto xp = x;
      auto xm = x;
      xp[a] += h;
      xm[a] -= h;
      fd[a] = (heat_kernel_eval(xp, t, p) - heat_kernel_eval(xm, t, p)) / (2.0 * h);
    }
    const double gn = std::hypot(g[0], g[1]);
    fd_worst = std::max(fd_worst, std::hypot(g[0] - fd[0], g[1] - fd[1]) / gn);
    const std::array<double, 2> mx{-x[0], -x[1]};
    const auto gm = heat_kernel_grad(mx, t, p);
    symmetric = symmetric && gm[0] == -g[0] && gm[1] == -g[1];
  }
  r.expect(fd_worst < 1e-6, fmt("gradient vs central differences: max relative error %.2e over 20 draws (tol 1e-6)", fd_worst));
  r.expect(symmetric, "gradient odd symmetry grad(-x) = -grad(x) holds exactly");
  return finish(r, timer);
}

CheckResult check_gradient_bound() {
  Timer timer;
  CheckResult r{"gradient L1 bound", true, {}, 0.0, 10.0};
  struct Case {
    int dim;
    double D;
    double lambda;
  };
  const std::array<Case, 5> cases{{{2, 1.0, 0.0}, {2, 1.0, 1.0}, {2, 0.5, 0.0}, {1, 1.0, 0.0}, {3, 2.0, 0.5}}};
  for (const auto& c : cases) {
    // Bound constant from direct quadrature of E|N| over a box.
    const std::array<double, 3> centre{0.0, 0.0, 0.0};
    const double mean_norm = integrate_box(
        [&](std::span<const double> y) {
          double r2 = 0.0;
          for (double v : y) r2 += v * v;
          return std::sqrt(r2) * std::exp(-0.5 * r2) / std::pow(2.0 * std::numbers::pi, 0.5 * c.dim);
        },
        std::span<const double>(centre.data(), static_cast<std::size_t>(c.dim)), 10.0, c.dim, 24, 4);
    const double bound = 2.0 * mean_norm / std::sqrt(2.0 * c.D);
    const KernelParams p{c.D, c.lambda, c.dim};
    double worst = 0.0;
    for (double t : {0.1, 0.5, 1.0, 2.0, 5.0}) worst = std::max(worst, grad_l1_integral(t, p) / std::sqrt(t));
    r.expect(worst <= 1.01 * bound, fmt("dim %d D %.1f lambda %.1f: max_t I(t)/sqrt(t) = %.6f, C = %.6f (+1%%)",
                                        c.dim, c.D, c.lambda, worst, bound));
  }
  return finish(r, timer);
}

CheckResult check_solver_against_duhamel() {
  Timer timer;
  CheckResult r{"solver vs Duhamel", true, {}, 0.0, 120.0};
  const RadialProfile exact(0.005, 9.0);
  std::vector<double> oracle;
  for (const auto& p : kProbes) oracle.push_back(exact.periodic(p));

  const auto base = probe_values(solve_stationary_source(0.05, 0.001));
  double worst = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) worst = std::max(worst, std::abs(base[i] - oracle[i]) / oracle[i]);
  r.expect(worst < 0.05, fmt("dx 0.05 dt 0.001 t 1: max relative probe error %.3e (tol 5e-2)", worst));

  std::array<double, 3> time_err{};
  const std::array<double, 3> dts{0.004, 0.002, 0.001};
  for (std::size_t k = 0; k < 3; ++k) time_err[k] = probe_error(probe_values(solve_stationary_source(0.025, dts[k])), oracle);
  for (std::size_t k = 0; k + 1 < 3; ++k) {
    const double order = std::log2(time_err[k] / time_err[k + 1]);
    r.expect(std::abs(order - 1.0) <= 0.3, fmt("time order dt %.3f -> %.4f at dx 0.025: %.3f (errors %.3e, %.3e)",
                                               dts[k], dts[k + 1], order, time_err[k], time_err[k + 1]));
  }

  std::array<double, 3> space_err{};
  const std::array<double, 3> dxs{0.1, 0.05, 0.025};
  for (std::size_t k = 0; k < 3; ++k) space_err[k] = relative_l2_error(solve_stationary_source(dxs[k], 2e-4), exact);
  for (std::size_t k = 0; k + 1 < 3; ++k) {
    const double order = std::log2(space_err[k] / space_err[k + 1]);
    r.expect(std::abs(order - 2.0) <= 0.3, fmt("space order dx %.3f -> %.3f at dt 2e-4 (L2): %.3f (errors %.3e, %.3e)",
                                               dxs[k], dxs[k + 1], order, space_err[k], space_err[k + 1]));
  }
  return finish(r, timer);
}

CheckResult check_picard_contraction() {
  Timer timer;
  CheckResult r{"Picard contraction", true, {}, 0.0, 30.0};
  const std::array<double, 2> a0{0.0, 0.0};
  SampledPath moving(2);
  for (int k = 0; k <= 20; ++k) {
    const double s = 0.05 * k;
    const std::array<double, 2> p{0.8 - 0.3 * s, 0.2 + 0.4 * s};
    moving.append(s, p);
  }
  const std::vector<SampledPath> paths{SampledPath::stationary(a0, 0.0, 1.0), moving};
  const EmissionFn arctan_c = [](std::span<const double> c, double) { return std::atan(c[0]); };
  const EmissionTable table{{arctan_c, arctan_c}};
  PicardOptions options;
  options.tol = 1e-8;
  const auto field = picard_solve(table, paths, {InitialField::constant(1.0)}, {KernelParams{1.0, 0.5, 2}}, 0.05, 1.0,
                                  options);
  bool geometric = true;
  double worst_ratio = 0.0;
  for (const auto& w : field.windows()) {
    const auto& d = w.differences;
    for (std::size_t k = 1; k < d.size(); ++k) {
      if (d[k - 1] <= 1e-13) break;  // rounding floor
      const double ratio = d[k] / d[k - 1];
      worst_ratio = std::max(worst_ratio, ratio);
      geometric = geometric && ratio < 1.0;
    }
    r.notes.push_back(fmt("     window [%.3f, %.3f]: %d iterations, contraction %.3f", w.t_begin, w.t_end, w.iterations,
                          w.contraction));
  }
  r.expect(geometric && worst_ratio < 1.0,
           fmt("successive sup-norm differences shrink every iteration, worst ratio %.3f", worst_ratio));
  const double residual = field.self_consistency_residual();
  r.expect(residual < 2.0 * options.tol, fmt("self-consistency residual %.2e (tol %.1e)", residual, 2.0 * options.tol));
  return finish(r, timer);
}

CheckResult check_noise_statistics(std::uint64_t seed) {
  Timer timer;
  CheckResult r{"noise statistics", true, {}, 0.0, 10.0};
  constexpr std::size_t n = 1000000;
  constexpr double sigma = 0.2;
  constexpr double dt = 0.001;
  RngStream stream{seed, 3, 0};
  std::array<double, 2> sum{};
  std::array<double, 2> sum2{};
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 z = brownian_increment(stream, dt, sigma);
    sum[0] += z.x;
    sum[1] += z.y;
    sum2[0] += z.x * z.x;
    sum2[1] += z.y * z.y;
  }
  const double target = sigma * sigma * dt;
  for (std::size_t a = 0; a < 2; ++a) {
    const double mean = sum[a] / n;
    const double var = (sum2[a] - n * mean * mean) / static_cast<double>(n - 1);
    // (n-1) s²/σ² is chi-squared with n-1 degrees of freedom: sd of s²/σ² is sqrt(2/(n-1)).
    const double z = (var / target - 1.0) / std::sqrt(2.0 / static_cast<double>(n - 1));
    r.expect(std::abs(var / target - 1.0) < 0.02,
             fmt("component %zu: sample variance %.6e vs %.1e (rel %.2e, chi-squared z %.2f)", a, var, target,
                 var / target - 1.0, z));
  }
  r.expect(stream.counter == 2 * n, fmt("stream advanced by exactly 2 draws per increment (%llu)",
                                        static_cast<unsigned long long>(stream.counter)));

  ExperimentOverrides o;
  o.horizon = 0.3;
  const auto cfg = build_experiment(2, o, seed);
  const auto a = run_simulation(cfg);
  const auto b = run_simulation(cfg);
  const bool same = io::trajectory_csv(a.trajectory) == io::trajectory_csv(b.trajectory) && a.events == b.events;
  r.expect(same, fmt("identical seed: trajectories of %zu rows bit-identical", a.trajectory.size()));
  return finish(r, timer);
}

CheckResult check_experiments(const ExperimentCheckOptions& options) {
  Timer timer;
  CheckResult r{"experiment reproduction", true, {}, 0.0, 600.0};
  ExperimentOverrides base;
  base.horizon = options.horizon;

  for (auto seed : options.seeds) {
    auto o = base;
    o.sigma = 0.05;
    const auto low = run_simulation(build_experiment(2, o, seed)).summary;
    o.sigma = 0.2;
    const auto high = run_simulation(build_experiment(2, o, seed)).summary;
    r.expect(high.mean_tortuosity > low.mean_tortuosity,
             fmt("exp 2 seed %llu: mean tortuosity sigma 0.2 = %.3f > sigma 0.05 = %.3f",
                 static_cast<unsigned long long>(seed), high.mean_tortuosity, low.mean_tortuosity));
  }
  for (auto seed : options.seeds) {
    std::array<double, 3> length{};
    const std::array<double, 3> eps{0.005, 0.02, 0.04};
    for (std::size_t k = 0; k < 3; ++k) {
      auto o = base;
      o.epsilon = eps[k];
      length[k] = run_simulation(build_experiment(3, o, seed)).summary.mean_path_length;
    }
    r.expect(length[0] < length[1] && length[1] < length[2],
             fmt("exp 3 seed %llu: mean path length eps 0.005/0.02/0.04 = %.2f / %.2f / %.2f (strictly increasing)",
                 static_cast<unsigned long long>(seed), length[0], length[1], length[2]));
  }
  for (auto seed : options.seeds) {
    auto o = base;
    o.cones_per_soma = 1;
    const auto nine = run_simulation(build_experiment(1, o, seed)).summary;
    o.cones_per_soma = 3;
    const auto many = run_simulation(build_experiment(1, o, seed)).summary;
    r.expect(many.connection_count >= nine.connection_count,
             fmt("exp 1 seed %llu: connections with 27 cones = %zu >= with 9 cones = %zu",
                 static_cast<unsigned long long>(seed), many.connection_count, nine.connection_count));
  }
  return finish(r, timer);
}

CheckResult check_epsilon_limit() {
  Timer timer;
  CheckResult r{"epsilon limit", true, {}, 0.0, 120.0};
  const auto zero = asymptotic_speed(0.05, 0.0, 1.0);
  r.expect(zero.v_eps == 1.0, fmt("a = 0: v = %.17g (expected exactly u = 1)", zero.v_eps));

  const std::vector<double> fig_set{0.05, 0.047, 0.044, 0.041, 0.038};
  const auto rows = sweep_epsilon(fig_set, 1.0, 1.0);
  std::string listing;
  for (const auto& row : rows) listing += fmt(" %.3f:%.5f", row.epsilon, row.v_eps);
  r.expect(sweep_is_monotone(rows), "v strictly increasing in eps over" + listing);

  std::vector<double> log_set;
  for (int k = 1; k <= 6; ++k) log_set.push_back(std::pow(10.0, -k));
  const auto log_rows = sweep_epsilon(log_set, 1.0, 1.0);
  bool decreasing = true;
  for (std::size_t k = 1; k < log_rows.size(); ++k) decreasing = decreasing && log_rows[k].v_eps < log_rows[k - 1].v_eps;
  listing.clear();
  for (const auto& row : log_rows) listing += fmt(" %.0e:%.4f", row.epsilon, row.v_eps);
  r.expect(decreasing, "v decreasing as eps -> 1e-6:" + listing);

  // 1/v against log(1/eps) is affine when v decays like 1/log(1/eps).
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  const double n = static_cast<double>(log_rows.size());
  for (const auto& row : log_rows) {
    const double x = std::log(1.0 / row.epsilon);
    const double y = 1.0 / row.v_eps;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double r2 = std::pow(n * sxy - sx * sy, 2) / ((n * sxx - sx * sx) * (n * syy - sy * sy));
  r.expect(slope > 0.0 && r2 >= 0.99,
           fmt("1/v vs log(1/eps): slope %.4f (a/8pi = %.4f), R^2 %.5f (>= 0.99)", slope, 1.0 / (8.0 * std::numbers::pi), r2));

  const auto fixed = asymptotic_speed(0.05, 1.0, 1.0);
  const auto trace = simulate_deterministic(DeterministicState::at_rest(0.0, 0.0, 0.05, 1.0, 1.0), 50.0, 1e-3);
  const double late = late_time_speed(trace, 1.0);
  const double rel = std::abs(late - fixed.v_eps) / fixed.v_eps;
  r.expect(rel < 0.05, fmt("eps 0.05: transient speed at t = 50 %.5f vs fixed point %.5f (rel %.2e, tol 5e-2)", late,
                           fixed.v_eps, rel));
  return finish(r, timer);
}

CheckResult check_structural_invariants() {
  Timer timer;
  CheckResult r{"structural invariants", true, {}, 0.0, 60.0};

  const double y0 = 0.37;
  const auto trace = simulate_deterministic(DeterministicState::at_rest(-1.0, y0, 0.05, 1.0, 1.0), 5.0, 1e-3);
  const bool flat = std::all_of(trace.y.begin(), trace.y.end(), [y0](double y) { return y == y0; });
  r.expect(flat, fmt("deterministic trajectory: second component equals %.2f at all %zu samples", y0, trace.y.size()));

  {
    const PeriodicGrid grid(3.0, 0.05);
    const SparseMatrix mass = assemble_mass(grid);
    ImplicitEulerStepper stepper(grid, mass, assemble_stiffness(grid, 1.0, 0.0, DecayPolicy::AllowZero), 1e-3);
    Eigen::VectorXd q = interpolate(grid, [](Vec2 p) { return std::exp(-2.0 * (p.x * p.x + 0.5 * p.y * p.y)) + 0.1 * std::cos(p.x); });
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(q.size());
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(q.size());
    const double m0 = ones.dot(mass * q);
    double drift = 0.0;
    for (int k = 0; k < 500; ++k) {
      q = stepper.step(q, zero);
      drift = std::max(drift, std::abs(ones.dot(mass * q) - m0) / std::abs(m0));
    }
    r.expect(drift < 1e-12, fmt("mass 1'Mq with lambda = 0, f = 0 over 500 steps: max relative drift %.2e (tol 1e-12)", drift));
  }

  ExperimentOverrides o;
  o.horizon = 2.0;
  RunOptions opts;
  opts.record_emissions = true;
  std::size_t contacts = 0;
  bool silent = true;
  bool monotone = true;
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto art = run_simulation(build_experiment(2, o, seed), opts);
    contacts += art.events.size();
    const double dt = art.config.dt;
    for (const auto& e : art.events) {
      const auto stop_step = static_cast<std::size_t>(std::llround(e.time / dt));
      for (const auto& rec : art.emissions) {
        if ((rec.walker_id == e.id_a || (e.kind == ContactKind::ConeCone && rec.walker_id == e.id_b)) &&
            rec.step > stop_step) {
          silent = false;
        }
      }
    }
    for (std::size_t k = 1; k < art.active_cone_counts.size(); ++k) {
      monotone = monotone && art.active_cone_counts[k] <= art.active_cone_counts[k - 1];
    }
  }
  r.expect(contacts > 0 && silent,
           fmt("no emission from a cone after its contact (%zu contacts in 3 runs of experiment 2)", contacts));
  r.expect(monotone, "active cone count never increases");
  return finish(r, timer);
}

std::vector<CheckResult> run_all_checks(bool include_experiments) {
  std::vector<CheckResult> out;
  out.push_back(check_kernel_identities());
  out.push_back(check_gradient_bound());
  out.push_back(check_solver_against_duhamel());
  out.push_back(check_picard_contraction());
  out.push_back(check_noise_statistics());
  if (include_experiments) out.push_back(check_experiments());
  out.push_back(check_epsilon_limit());
  out.push_back(check_structural_invariants());
  return out;
}

}  // namespace neurowire
