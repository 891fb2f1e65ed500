#include "neurowire/io/output.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstring>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "neurowire/errors.hpp"
#include "neurowire/io/config.hpp"
#include "neurowire/io/format.hpp"
#include "neurowire/io/svg.hpp"

namespace neurowire::io {

namespace fs = std::filesystem;

namespace {

using Json = nlohmann::ordered_json;

// nlohmann prints integral doubles as "1.0"; numbers go through
// format_double instead so every file shares one number format.
Json number(double v) { return Json::parse(format_double(v)); }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void preflight_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out || !(out << "ok")) throw IoError("output directory is not writable: " + dir.string());
  }
  fs::remove(probe, ec);
}

std::string trajectory_csv(const std::vector<TrajectoryRow>& rows) {
  std::string out = kTrajectoryHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.step);
    out += ',';
    out += format_double(r.time);
    out += ',';
    out += std::to_string(r.walker_id);
    out += ',';
    out += r.kind == WalkerKind::Soma ? "soma" : "cone";
    out += ',';
    out += format_double(r.position.x);
    out += ',';
    out += format_double(r.position.y);
    out += r.active ? ",1\n" : ",0\n";
  }
  return out;
}

std::vector<TrajectoryRow> parse_trajectory_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader) {
    throw ParseError("trajectory CSV: unexpected header", 1, 1);
  }
  std::vector<TrajectoryRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 7) throw ParseError("trajectory CSV: expected 7 fields", lineno, 1);
    try {
      TrajectoryRow r;
      r.step = std::stoull(f[0]);
      r.time = std::stod(f[1]);
      r.walker_id = std::stoull(f[2]);
      if (f[3] == "soma") {
        r.kind = WalkerKind::Soma;
      } else if (f[3] == "cone") {
        r.kind = WalkerKind::GrowthCone;
      } else {
        throw ParseError("trajectory CSV: unknown kind '" + f[3] + "'", lineno, 1);
      }
      r.position = {std::stod(f[4]), std::stod(f[5])};
      r.active = f[6] == "1";
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw ParseError("trajectory CSV: malformed number", lineno, 1);
    }
  }
  return rows;
}

std::string field_snapshot_csv(const FieldSnapshot& snapshot, const PeriodicGrid& grid) {
  std::string out = "node,x,y";
  for (std::size_t i = 0; i < snapshot.state.species_count(); ++i) out += ",c" + std::to_string(i);
  out += '\n';
  for (std::size_t k = 0; k < grid.node_count(); ++k) {
    const Vec2 p = grid.node_position(k);
    out += std::to_string(k) + ',' + format_double(p.x) + ',' + format_double(p.y);
    for (const auto& q : snapshot.state.coefficients) {
      out += ',';
      out += format_double(q[static_cast<Eigen::Index>(k)]);
    }
    out += '\n';
  }
  return out;
}

std::string field_snapshot_binary(const FieldSnapshot& snapshot) {
  std::string out;
  for (const auto& q : snapshot.state.coefficients) {
    for (Eigen::Index k = 0; k < q.size(); ++k) {
      const double v = q[k];
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &v, sizeof v);
      if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof v);
      out.append(reinterpret_cast<const char*>(bytes), sizeof v);
    }
  }
  return out;
}

std::string field_snapshot_sidecar(const FieldSnapshot& snapshot, const PeriodicGrid& grid,
                                   const std::string& data_file) {
  Json j;
  j["data_file"] = data_file;
  j["dtype"] = "float64";
  j["byte_order"] = "little";
  j["layout"] = "row-major [species][node]";
  j["species"] = snapshot.state.species_count();
  j["nodes"] = grid.node_count();
  j["nodes_per_axis"] = grid.cells_per_axis();
  j["half_length"] = number(grid.half_length());
  j["spacing"] = number(grid.spacing());
  j["node_index"] = "j * nodes_per_axis + i at (-L + i*dx, -L + j*dx)";
  j["step"] = snapshot.step;
  j["time"] = number(snapshot.state.time);
  return j.dump(2) + "\n";
}

std::string contacts_jsonl(const std::vector<ContactEvent>& events) {
  std::string out;
  for (const auto& e : events) {
    Json j;
    j["time"] = number(e.time);
    j["cone"] = e.id_a;
    j["other"] = e.id_b;
    j["kind"] = e.kind == ContactKind::ConeSoma ? "cone-soma" : "cone-cone";
    out += j.dump() + "\n";
  }
  return out;
}

std::string summary_json(const RunArtifact& a) {
  Json j;
  j["steps"] = a.config.step_count();
  j["walkers"] = a.initial_walkers.size();
  j["final_active_count"] = a.summary.final_active_count;
  j["connection_count"] = a.summary.connection_count;
  j["mean_path_length"] = number(a.summary.mean_path_length);
  j["mean_tortuosity"] = number(a.summary.mean_tortuosity);
  Json cones = Json::array();
  for (const auto& c : a.summary.cones) {
    Json cj;
    cj["walker_id"] = c.walker_id;
    cj["path_length"] = number(c.path_length);
    cj["net_displacement"] = {number(c.net_displacement.x), number(c.net_displacement.y)};
    cj["tortuosity"] = std::isfinite(c.tortuosity) ? number(c.tortuosity) : Json(nullptr);
    cj["active_at_end"] = c.active_at_end;
    cones.push_back(cj);
  }
  j["cones"] = cones;
  Json conns = Json::array();
  for (const auto& e : a.events) conns.push_back({e.id_a, e.id_b});
  j["connections"] = conns;
  return j.dump(2) + "\n";
}

std::string emissions_csv(const std::vector<EmissionRecord>& records) {
  std::string out = "step,walker_id,a0,a1,a2\n";
  for (const auto& r : records) {
    out += std::to_string(r.step) + ',' + std::to_string(r.walker_id);
    for (double v : r.amplitude) out += ',' + format_double(v);
    out += '\n';
  }
  return out;
}

std::string manifest_json(const RunManifest& m) {
  Json j;
  j["config_hash"] = m.config_hash;
  j["seed"] = m.seed;
  j["version"] = m.version;
  j["started_at"] = m.started_at;
  j["finished_at"] = m.finished_at;
  Json files = Json::array();
  for (const auto& f : m.files) files.push_back({{"name", f.name}, {"bytes", f.bytes}, {"sha256", f.sha256}});
  j["files"] = files;
  return j.dump(2) + "\n";
}

RunManifest emit_outputs(const RunArtifact& artifact, RunManifest manifest, const fs::path& dir) {
  preflight_output_dir(dir);
  manifest.files.clear();
  auto put = [&](const std::string& name, const std::string& bytes) {
    const fs::path path = dir / name;
    fs::create_directories(path.parent_path());
    write_file(path, bytes);
    manifest.files.push_back({name, bytes.size(), sha256_hex(bytes)});
  };
  const PeriodicGrid grid(artifact.config.half_length, artifact.config.spacing);
  put("config.json", serialize_config(artifact.config));
  put("trajectory.csv", trajectory_csv(artifact.trajectory));
  for (const auto& snap : artifact.snapshots) {
    std::ostringstream name;
    name << "fields/step_" << std::setw(7) << std::setfill('0') << snap.step;
    put(name.str() + ".csv", field_snapshot_csv(snap, grid));
    put(name.str() + ".bin", field_snapshot_binary(snap));
    put(name.str() + ".json", field_snapshot_sidecar(snap, grid, name.str() + ".bin"));
  }
  put("contacts.jsonl", contacts_jsonl(artifact.events));
  put("summary.json", summary_json(artifact));
  if (!artifact.emissions.empty()) put("emissions.csv", emissions_csv(artifact.emissions));
  std::string title = artifact.config.experiment ? "experiment " + std::to_string(*artifact.config.experiment) : "run";
  title += ", seed " + std::to_string(artifact.config.seed);
  put("trajectories.svg", render_trajectory_svg(artifact.trajectory, artifact.config.half_length, title));
  if (manifest.config_hash.empty()) manifest.config_hash = config_hash(artifact.config);
  manifest.seed = artifact.config.seed;
  if (manifest.finished_at.empty()) manifest.finished_at = utc_now();
  write_file(dir / "manifest.json", manifest_json(manifest));
  return manifest;
}

std::vector<std::string> verify_manifest(const fs::path& dir) {
  const auto j = Json::parse(read_file(dir / "manifest.json"));
  std::vector<std::string> bad;
  for (const auto& f : j.at("files")) {
    const auto name = f.at("name").get<std::string>();
    const fs::path path = dir / name;
    if (!fs::exists(path) || sha256_file(path) != f.at("sha256").get<std::string>()) bad.push_back(name);
  }
  return bad;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "epsilon,v_eps,residual\n";
  for (const auto& r : rows) {
    out += format_double(r.epsilon) + ',' + format_double(r.v_eps) + ',' + format_double(r.residual) + '\n';
  }
  return out;
}

std::string speed_trace_csv(const DeterministicTrace& trace) {
  std::string out = "t,x,y,speed\n";
  for (std::size_t k = 0; k < trace.speed.size(); ++k) {
    out += format_double(trace.times[k]) + ',' + format_double(trace.x[k]) + ',' + format_double(trace.y[k]) + ',' +
           format_double(trace.speed[k]) + '\n';
  }
  return out;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace neurowire::io
