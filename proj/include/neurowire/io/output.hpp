#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "neurowire/epsilon_limit.hpp"
#include "neurowire/simulation.hpp"

namespace neurowire::io {

inline constexpr const char* kTrajectoryHeader = "step,time,walker_id,kind,x,y,active";

struct ManifestEntry {
  std::string name;
  std::uint64_t bytes = 0;
  std::string sha256;
};

struct RunManifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string version;
  std::string started_at;
  std::string finished_at;
  std::vector<ManifestEntry> files;
};

/// Creates `dir` if needed and proves it writable; IoError otherwise.
void preflight_output_dir(const std::filesystem::path& dir);

std::string trajectory_csv(const std::vector<TrajectoryRow>& rows);
std::vector<TrajectoryRow> parse_trajectory_csv(const std::string& text);

/// Nodal values of every species: node,x,y,c0,c1,...
std::string field_snapshot_csv(const FieldSnapshot& snapshot, const PeriodicGrid& grid);
/// Little-endian float64, row-major [species][node].
std::string field_snapshot_binary(const FieldSnapshot& snapshot);
/// Grid metadata describing the binary file.
std::string field_snapshot_sidecar(const FieldSnapshot& snapshot, const PeriodicGrid& grid,
                                   const std::string& data_file);
/// One JSON object per line; empty string for no events.
std::string contacts_jsonl(const std::vector<ContactEvent>& events);
std::string summary_json(const RunArtifact& artifact);
std::string emissions_csv(const std::vector<EmissionRecord>& records);

/// Writes every artifact file into `dir`, then manifest.json listing them with
/// checksums. Returns the completed manifest.
RunManifest emit_outputs(const RunArtifact& artifact, RunManifest manifest, const std::filesystem::path& dir);

std::string manifest_json(const RunManifest& manifest);

/// Re-hashes every file in dir/manifest.json; returns the names that are
/// missing or differ.
std::vector<std::string> verify_manifest(const std::filesystem::path& dir);

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string speed_trace_csv(const DeterministicTrace& trace);

/// UTC ISO-8601 wall clock time.
std::string utc_now();

}  // namespace neurowire::io
