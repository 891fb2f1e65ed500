#include "neurowire/scenario.hpp"

#include <cmath>

#include "neurowire/errors.hpp"
#include "neurowire/rng.hpp"

namespace neurowire {

namespace {

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(field, "must be positive");
}

}  // namespace

void ScenarioConfig::validate() const {
  if (schema_version != kConfigSchemaVersion) {
    throw ValidationError("schema_version", "unsupported version " + std::to_string(schema_version));
  }
  require_positive(half_length, "grid.half_length");
  require_positive(spacing, "grid.spacing");
  try {
    PeriodicGrid check(half_length, spacing);
  } catch (const DomainError& e) {
    throw ValidationError("grid.spacing", e.what());
  }
  require_positive(dt, "dt");
  require_positive(horizon, "horizon");
  require_positive(epsilon, "epsilon");
  if (!(sigma >= 0.0)) throw ValidationError("sigma", "must be non-negative");
  require_positive(contact_threshold, "contact_threshold");
  if (!(activation_offset >= 0.0)) throw ValidationError("activation_offset", "must be non-negative");
  if (species.size() != kSpeciesCount) throw ValidationError("species", "exactly three species required");
  for (std::size_t i = 0; i < species.size(); ++i) {
    const std::string base = "species[" + std::to_string(i) + "]";
    if (!(species[i].D > 0.0)) throw ValidationError(base + ".D", "must be positive");
    if (!(species[i].lambda > 0.0)) throw ValidationError(base + ".lambda", "must be positive");
  }
  if (initial_concentration.size() != kSpeciesCount) {
    throw ValidationError("initial_concentration", "one value per species required");
  }
  switch (somas.kind) {
    case SomaLayout::Kind::Explicit:
      for (std::size_t k = 0; k < somas.positions.size(); ++k) {
        const Vec2 p = somas.positions[k];
        if (!(p.x >= -half_length && p.x < half_length && p.y >= -half_length && p.y < half_length)) {
          throw ValidationError("somas.positions[" + std::to_string(k) + "]", "outside the domain");
        }
      }
      break;
    case SomaLayout::Kind::GridWithDeviation:
      if (somas.rows == 0 || somas.cols == 0) throw ValidationError("somas.rows", "must be positive");
      if (!(somas.deviation >= 0.0)) throw ValidationError("somas.deviation", "must be non-negative");
      if (somas.deviation >= half_length / static_cast<double>(std::max(somas.rows, somas.cols))) {
        throw ValidationError("somas.deviation", "larger than half the lattice spacing");
      }
      break;
    case SomaLayout::Kind::Random:
      if (somas.count == 0) throw ValidationError("somas.count", "must be positive");
      if (!(somas.min_separation >= 0.0)) throw ValidationError("somas.min_separation", "must be non-negative");
      break;
  }
  try {
    coefficients.validate();
  } catch (const InputError& e) {
    throw ValidationError("coefficients", e.what());
  }
}

std::size_t ScenarioConfig::step_count() const {
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

ScenarioConfig build_experiment(int which, const ExperimentOverrides& o, std::uint64_t seed) {
  ScenarioConfig c;
  c.experiment = which;
  c.seed = seed;
  switch (which) {
    case 1:
      c.somas.kind = SomaLayout::Kind::GridWithDeviation;
      c.somas.rows = 3;
      c.somas.cols = 3;
      c.somas.deviation = 0.3;
      c.cones_per_soma = o.cones_per_soma.value_or(1);
      c.activation_offset = 0.8;
      c.sigma = o.sigma.value_or(0.2);
      c.epsilon = o.epsilon.value_or(0.01);
      c.beta = o.beta.value_or(15.0);
      c.gamma = o.gamma.value_or(10.0);
      c.coefficients = dense_network_coefficients(c.beta, c.gamma);
      break;
    case 2:
      c.somas.kind = SomaLayout::Kind::Random;
      c.somas.count = 6;
      c.sigma = o.sigma.value_or(0.2);
      c.epsilon = o.epsilon.value_or(0.1);
      c.beta = o.beta.value_or(15.0);
      c.gamma = o.gamma.value_or(10.0);
      c.coefficients = base_coefficients(c.beta, c.gamma);
      break;
    case 3:
      c.somas.kind = SomaLayout::Kind::Random;
      c.somas.count = 2;
      c.sigma = o.sigma.value_or(0.1);
      c.epsilon = o.epsilon.value_or(0.02);
      c.beta = o.beta.value_or(15.0);
      c.gamma = o.gamma.value_or(10.0);
      c.coefficients = base_coefficients(c.beta, c.gamma);
      break;
    case 4:
      c.somas.kind = SomaLayout::Kind::Random;
      c.somas.count = 4;
      c.sigma = o.sigma.value_or(0.2);
      c.epsilon = o.epsilon.value_or(0.01);
      c.beta = o.beta.value_or(15.0);
      c.gamma = o.gamma.value_or(10.0);
      c.coefficients = base_coefficients(c.beta, c.gamma);
      break;
    default:
      throw InputError("build_experiment: experiment id must be 1, 2, 3 or 4");
  }
  if (which != 1 && o.cones_per_soma) c.cones_per_soma = *o.cones_per_soma;
  if (o.horizon) c.horizon = *o.horizon;
  c.validate();
  return c;
}

std::vector<Vec2> resolve_soma_positions(const ScenarioConfig& config) {
  const PeriodicGrid grid(config.half_length, config.spacing);
  const auto& layout = config.somas;
  RngStream rng{config.seed, kLayoutStream, 0};
  const double L = config.half_length;
  std::vector<Vec2> out;
  switch (layout.kind) {
    case SomaLayout::Kind::Explicit:
      return layout.positions;
    case SomaLayout::Kind::GridWithDeviation: {
      const double hx = 2.0 * L / static_cast<double>(layout.cols);
      const double hy = 2.0 * L / static_cast<double>(layout.rows);
      for (std::size_t r = 0; r < layout.rows; ++r) {
        for (std::size_t col = 0; col < layout.cols; ++col) {
          const Vec2 site{-L + (static_cast<double>(col) + 0.5) * hx, -L + (static_cast<double>(r) + 0.5) * hy};
          const double dx = layout.deviation * (2.0 * rng.next_uniform() - 1.0);
          const double dy = layout.deviation * (2.0 * rng.next_uniform() - 1.0);
          out.push_back(grid.wrap(site + Vec2{dx, dy}));
        }
      }
      return out;
    }
    case SomaLayout::Kind::Random: {
      constexpr int kMaxAttempts = 100000;
      int attempts = 0;
      while (out.size() < layout.count) {
        if (++attempts > kMaxAttempts) {
          throw ValidationError("somas.min_separation", "cannot place somas with this separation");
        }
        const Vec2 p{L * (2.0 * rng.next_uniform() - 1.0), L * (2.0 * rng.next_uniform() - 1.0)};
        bool ok = true;
        for (const auto& q : out) ok = ok && grid.periodic_distance(p, q) >= layout.min_separation;
        if (ok) out.push_back(grid.wrap(p));
      }
      return out;
    }
  }
  return out;
}

std::vector<Walker> build_walkers(const ScenarioConfig& config) {
  const auto somas = resolve_soma_positions(config);
  std::vector<Walker> walkers;
  for (const auto& p : somas) {
    Walker w;
    w.id = walkers.size();
    w.kind = WalkerKind::Soma;
    w.position = p;
    walkers.push_back(w);
  }
  for (std::size_t s = 0; s < somas.size(); ++s) {
    for (std::size_t k = 0; k < config.cones_per_soma; ++k) {
      Walker w;
      w.id = walkers.size();
      w.kind = WalkerKind::GrowthCone;
      w.position = somas[s];
      w.origin_soma = s;
      w.activation_time = static_cast<double>(k) * config.activation_offset;
      w.sigma = config.sigma;
      walkers.push_back(w);
    }
  }
  return walkers;
}

}  // namespace neurowire
