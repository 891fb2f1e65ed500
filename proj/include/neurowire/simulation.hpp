#pragma once

#include <cstddef>
#include <vector>

#include "neurowire/field.hpp"
#include "neurowire/scenario.hpp"
#include "neurowire/time_stepper.hpp"
#include "neurowire/walker.hpp"

namespace neurowire {

struct TrajectoryRow {
  std::size_t step = 0;
  double time = 0.0;
  std::size_t walker_id = 0;
  WalkerKind kind = WalkerKind::GrowthCone;
  Vec2 position;
  bool active = true;
};

struct FieldSnapshot {
  std::size_t step = 0;
  FieldState state;
};

struct ConeSummary {
  std::size_t walker_id = 0;
  double path_length = 0.0;
  /// Unwrapped displacement from the start position.
  Vec2 net_displacement;
  /// path_length / |net_displacement| (infinite for a closed or empty path).
  double tortuosity = 0.0;
  bool active_at_end = true;
};

struct RunSummary {
  std::vector<ConeSummary> cones;
  double mean_path_length = 0.0;
  /// Mean over cones with non-zero net displacement.
  double mean_tortuosity = 0.0;
  std::size_t final_active_count = 0;
  std::size_t connection_count = 0;
};

/// Per-step record of what every walker actually injected into the fields.
struct EmissionRecord {
  std::size_t step = 0;
  std::size_t walker_id = 0;
  std::array<double, kSpeciesCount> amplitude{};
};

struct RunArtifact {
  ScenarioConfig config;
  std::vector<Walker> initial_walkers;
  std::vector<TrajectoryRow> trajectory;
  std::vector<FieldSnapshot> snapshots;
  std::vector<ContactEvent> events;
  std::vector<std::size_t> active_cone_counts;
  std::vector<EmissionRecord> emissions;
  RunSummary summary;
};

struct RunOptions {
  SolverBackend backend = SolverBackend::Circulant;
  bool record_emissions = false;
  bool check_residual = true;
};

/// Interleaves the walker update, contact detection, source assembly at the
/// new positions, and one implicit Euler step per species, for
/// round(T/Δt) steps.
RunArtifact run_simulation(const ScenarioConfig& config, const RunOptions& options = {});

RunSummary summarize(const std::vector<TrajectoryRow>& trajectory, const PeriodicGrid& grid,
                     std::size_t connection_count);

}  // namespace neurowire
