#include "neurowire/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "neurowire/errors.hpp"

namespace neurowire {

PicardField::PicardField(std::vector<KernelParams> species, std::vector<SampledPath> paths,
                         std::vector<InitialField> initial, double epsilon,
                         std::vector<double> node_times, QuadratureSpec quadrature)
    : species_(std::move(species)),
      paths_(std::move(paths)),
      initial_(std::move(initial)),
      epsilon_(epsilon),
      node_times_(std::move(node_times)),
      quadrature_(quadrature),
      samples_(species_.size() * paths_.size() * node_times_.size(), 0.0),
      amplitudes_(samples_.size(), 0.0) {}

double PicardField::path_sample(std::size_t species, std::size_t path, std::size_t node) const {
  return samples_.at(flat(species, path, node));
}

double PicardField::amplitude_sample(std::size_t species, std::size_t path, std::size_t node) const {
  return amplitudes_.at(flat(species, path, node));
}

double PicardField::interpolated_amplitude(std::size_t i, std::size_t j, double s) const {
  const auto& nodes = node_times_;
  if (s <= nodes.front()) return amplitudes_[flat(i, j, 0)];
  if (s >= nodes.back()) return amplitudes_[flat(i, j, nodes.size() - 1)];
  const auto hi = static_cast<std::size_t>(std::upper_bound(nodes.begin(), nodes.end(), s) - nodes.begin());
  const std::size_t lo = hi - 1;
  const double w = (s - nodes[lo]) / (nodes[hi] - nodes[lo]);
  const double a = amplitudes_[flat(i, j, lo)];
  const double b = amplitudes_[flat(i, j, hi)];
  return a + w * (b - a);
}

double PicardField::map_value(std::size_t i, std::size_t j, std::size_t k) const {
  const double t = node_times_[k];
  const auto x = paths_[j].evaluate(t);
  if (k == 0) return initial_[i](x);
  double u = evolve_initial(initial_[i], x, t, species_[i], quadrature_);
  for (std::size_t l = 0; l < paths_.size(); ++l) {
    const Amplitude amp = [this, i, l](double s) { return interpolated_amplitude(i, l, s); };
    u += mollified_source_response(x, t, paths_[l], amp, epsilon_, species_[i], quadrature_);
  }
  return u;
}

double PicardField::value(std::size_t species, std::span<const double> x, double t) const {
  if (t < 0.0 || t > node_times_.back() + 1e-12) throw InputError("PicardField: t outside [0, T]");
  const KernelParams& p = species_.at(species);
  if (t == 0.0) return initial_[species](x);
  double u = evolve_initial(initial_[species], x, t, p, quadrature_);
  for (std::size_t l = 0; l < paths_.size(); ++l) {
    const Amplitude amp = [this, species, l](double s) { return interpolated_amplitude(species, l, s); };
    u += mollified_source_response(x, t, paths_[l], amp, epsilon_, p, quadrature_);
  }
  return u;
}

std::vector<double> PicardField::gradient(std::size_t species, std::span<const double> x,
                                          double t) const {
  if (!(t > 0.0) || t > node_times_.back() + 1e-12) throw InputError("PicardField: t outside (0, T]");
  const KernelParams& p = species_.at(species);
  const auto d = static_cast<std::size_t>(p.dim);
  std::vector<double> total(d, 0.0);
  std::vector<double> part(d, 0.0);
  evolve_initial(initial_[species], x, t, p, quadrature_, total);
  for (std::size_t l = 0; l < paths_.size(); ++l) {
    const Amplitude amp = [this, species, l](double s) { return interpolated_amplitude(species, l, s); };
    mollified_source_response(x, t, paths_[l], amp, epsilon_, p, quadrature_,
                              ConvolutionMode::ClosedForm, part);
    for (std::size_t k = 0; k < d; ++k) total[k] += part[k];
  }
  return total;
}

double PicardField::self_consistency_residual() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < species_.size(); ++i) {
    for (std::size_t j = 0; j < paths_.size(); ++j) {
      for (std::size_t k = 0; k < node_times_.size(); ++k) {
        worst = std::max(worst, std::abs(map_value(i, j, k) - samples_[flat(i, j, k)]));
      }
    }
  }
  return worst;
}

PicardField picard_solve(const EmissionTable& emission, const std::vector<SampledPath>& paths,
                         const std::vector<InitialField>& initial,
                         const std::vector<KernelParams>& species, double epsilon, double horizon,
                         const PicardOptions& options) {
  if (!(horizon > 0.0)) throw DomainError("picard_solve: horizon must be positive");
  if (!(epsilon > 0.0)) throw DomainError("picard_solve: epsilon must be positive");
  if (options.time_nodes < 2) throw InputError("picard_solve: need at least two time nodes");
  const std::size_t n = species.size();
  const std::size_t m = paths.size();
  if (n == 0) throw InputError("picard_solve: no species");
  if (initial.size() != n) throw InputError("picard_solve: one initial field per species required");
  if (emission.size() != n) throw InputError("picard_solve: emission table needs one row per species");
  for (const auto& row : emission) {
    if (row.size() != m) throw InputError("picard_solve: emission table needs one entry per path");
  }
  for (const auto& p : species) p.validate();
  for (const auto& path : paths) {
    if (!path.covers(0.0, horizon)) throw InputError("picard_solve: path does not cover [0, T]");
    if (path.dim() != species.front().dim) throw InputError("picard_solve: path dimension mismatch");
  }

  const std::size_t nodes = options.time_nodes;
  std::vector<double> times(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    times[k] = horizon * static_cast<double>(k) / static_cast<double>(nodes - 1);
  }
  PicardField field(species, paths, initial, epsilon, times, options.quadrature);

  // u^{(0)}: evolution of the initial data alone.
  std::vector<double> baseline(field.samples_.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < nodes; ++k) {
        const auto x = paths[j].evaluate(times[k]);
        baseline[field.flat(i, j, k)] =
            k == 0 ? initial[i](x) : evolve_initial(initial[i], x, times[k], species[i], options.quadrature);
      }
    }
  }
  field.samples_ = baseline;

  std::vector<double> c(n);
  auto refresh_amplitudes = [&](std::size_t k_begin, std::size_t k_end) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = k_begin; k <= k_end; ++k) {
        for (std::size_t i = 0; i < n; ++i) c[i] = field.samples_[field.flat(i, j, k)];
        for (std::size_t i = 0; i < n; ++i) {
          field.amplitudes_[field.flat(i, j, k)] = emission[i][j](c, times[k]);
        }
      }
    }
  };
  refresh_amplitudes(0, 0);

  std::size_t k_begin = 1;
  std::size_t k_end = nodes - 1;
  std::vector<double> next(field.samples_.size());
  while (k_begin < nodes) {
    PicardWindow window;
    window.t_begin = times[k_begin - 1];
    window.t_end = times[k_end];
    bool converged = false;
    bool diverging = false;
    for (int iter = 0; iter < options.max_iterations; ++iter) {
      refresh_amplitudes(k_begin, k_end);
      double diff = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          for (std::size_t k = k_begin; k <= k_end; ++k) {
            const double v = field.map_value(i, j, k);
            next[field.flat(i, j, k)] = v;
            diff = std::max(diff, std::abs(v - field.samples_[field.flat(i, j, k)]));
          }
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          for (std::size_t k = k_begin; k <= k_end; ++k) {
            field.samples_[field.flat(i, j, k)] = next[field.flat(i, j, k)];
          }
        }
      }
      window.iterations = iter + 1;
      if (!std::isfinite(diff)) {
        diverging = true;
        break;
      }
      if (!window.differences.empty() && window.differences.back() > 0.0) {
        const double ratio = diff / window.differences.back();
        window.contraction = std::max(window.contraction, ratio);
        if (ratio >= 1.0 && window.differences.size() >= 2 && k_end > k_begin) {
          window.differences.push_back(diff);
          diverging = true;
          break;
        }
      }
      window.differences.push_back(diff);
      if (diff < options.tol) {
        converged = true;
        break;
      }
    }
    if (converged) {
      refresh_amplitudes(k_begin, k_end);
      field.windows_.push_back(std::move(window));
      k_begin = k_end + 1;
      k_end = nodes - 1;
      continue;
    }
    if (k_end > k_begin) {
      // Restart on the first half of the window.
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          for (std::size_t k = k_begin; k <= k_end; ++k) {
            field.samples_[field.flat(i, j, k)] = baseline[field.flat(i, j, k)];
          }
        }
      }
      k_end = k_begin + (k_end - k_begin) / 2;
      continue;
    }
    std::ostringstream msg;
    msg << "picard_solve: no convergence on [" << window.t_begin << ", " << window.t_end
        << "] after " << window.iterations << " iterations"
        << (diverging ? " (diverging)" : "") << ", contraction estimate " << window.contraction;
    throw ConvergenceError(msg.str(), window.contraction);
  }
  return field;
}

LipschitzStats lipschitz_probe(std::span<const LipschitzPair> pairs, double t, std::size_t species) {
  LipschitzStats stats;
  for (const auto& pair : pairs) {
    if (!pair.field || !pair.field_bar) throw InputError("lipschitz_probe: missing field");
    double dx = 0.0;
    for (std::size_t k = 0; k < pair.x.size(); ++k) {
      dx += (pair.x[k] - pair.x_bar[k]) * (pair.x[k] - pair.x_bar[k]);
    }
    dx = std::sqrt(dx);
    double dpath = 0.0;
    if (pair.field != pair.field_bar) {
      const auto& a = pair.field->paths();
      const auto& b = pair.field_bar->paths();
      if (a.size() != b.size()) throw InputError("lipschitz_probe: path count mismatch");
      for (std::size_t j = 0; j < a.size(); ++j) dpath = std::max(dpath, sup_distance(a[j], b[j], 0.0, t));
    }
    const double denom = dx + dpath;
    if (!(denom > 0.0)) throw InputError("lipschitz_probe: pair with zero distance");
    const double du = std::abs(pair.field->value(species, pair.x, t) -
                               pair.field_bar->value(species, pair.x_bar, t));
    const auto g = pair.field->gradient(species, pair.x, t);
    const auto gb = pair.field_bar->gradient(species, pair.x_bar, t);
    double dg = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) dg += (g[k] - gb[k]) * (g[k] - gb[k]);
    stats.value_ratio_max = std::max(stats.value_ratio_max, du / denom);
    stats.gradient_ratio_max = std::max(stats.gradient_ratio_max, std::sqrt(dg) / denom);
    ++stats.pairs;
  }
  return stats;
}

}  // namespace neurowire
