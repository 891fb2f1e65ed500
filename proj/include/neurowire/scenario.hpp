#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "neurowire/coefficients.hpp"
#include "neurowire/fem.hpp"
#include "neurowire/grid.hpp"
#include "neurowire/walker.hpp"

namespace neurowire {

inline constexpr int kConfigSchemaVersion = 1;

/// Where the somas go. Random layouts are drawn from the scenario seed.
struct SomaLayout {
  enum class Kind { Explicit, GridWithDeviation, Random };

  Kind kind = Kind::Explicit;
  std::vector<Vec2> positions;
  /// GridWithDeviation: rows × cols evenly spaced lattice sites, each moved by
  /// a uniform offset in [-deviation, deviation]².
  std::size_t rows = 3;
  std::size_t cols = 3;
  double deviation = 0.3;
  /// Random: `count` uniform positions in the domain, pairwise at least
  /// `min_separation` apart (periodic distance).
  std::size_t count = 0;
  double min_separation = 1.0;

  friend bool operator==(const SomaLayout&, const SomaLayout&) = default;
};

struct OutputOptions {
  std::size_t snapshot_every = 0;
  std::string directory;

  friend bool operator==(const OutputOptions&, const OutputOptions&) = default;
};

/// Complete description of one run.
struct ScenarioConfig {
  int schema_version = kConfigSchemaVersion;
  std::optional<int> experiment;

  double half_length = 3.0;
  double spacing = 0.05;
  double dt = 0.001;
  double horizon = 5.0;
  /// attractive, repulsive, trigger
  std::vector<SpeciesParams> species{{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}};
  /// Constant initial concentration per species.
  std::vector<double> initial_concentration{0.0, 0.0, 0.0};
  double epsilon = 0.01;
  double sigma = 0.2;
  double beta = 15.0;
  double gamma = 10.0;
  SomaLayout somas;
  std::size_t cones_per_soma = 1;
  /// Cone k of a soma starts at k · activation_offset.
  double activation_offset = 0.8;
  double contact_threshold = 0.1;
  std::uint64_t seed = 0;
  bool literal_noise = false;
  CoefficientSpec coefficients = base_coefficients(15.0, 10.0);
  OutputOptions output;

  /// Throws ValidationError naming the first offending field.
  void validate() const;
  std::size_t step_count() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Experiment presets. Overrides that only make sense for one experiment are
/// optional fields; unset values take the preset.
struct ExperimentOverrides {
  std::optional<double> sigma;
  std::optional<double> epsilon;
  std::optional<double> beta;
  std::optional<double> gamma;
  std::optional<std::size_t> cones_per_soma;
  std::optional<double> horizon;
};

/// 1: 3×3 soma grid with deviation 0.3, one or three cones per soma.
/// 2: six random somas, ε = 0.1, σ = 0.2 (σ = 0.05 for the comparison run).
/// 3: two random somas, σ = 0.1, ε from the overrides (default 0.02).
/// 4: four random somas, σ = 0.2, ε = 0.01, (β, γ) from the overrides.
ScenarioConfig build_experiment(int which, const ExperimentOverrides& overrides, std::uint64_t seed);

/// Soma positions for a config (deterministic in the seed).
std::vector<Vec2> resolve_soma_positions(const ScenarioConfig& config);

/// Somas first (ids 0..s-1), then cones grouped by soma.
std::vector<Walker> build_walkers(const ScenarioConfig& config);

}  // namespace neurowire
