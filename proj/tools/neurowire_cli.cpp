#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "neurowire/epsilon_limit.hpp"
#include "neurowire/errors.hpp"
#include "neurowire/io/config.hpp"
#include "neurowire/io/format.hpp"
#include "neurowire/io/output.hpp"
#include "neurowire/io/svg.hpp"
#include "neurowire/scenario.hpp"
#include "neurowire/simulation.hpp"
#include "neurowire/validation.hpp"

namespace fs = std::filesystem;
using namespace neurowire;

namespace {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kBadInput = 2, kIoFailure = 3, kNumericFailure = 4 };

bool quiet = false;

void note(const std::string& line) {
  if (!quiet) std::cerr << line << '\n';
}

fs::path output_root(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("NEUROWIRE_OUT_ROOT"); env != nullptr && *env != '\0') return env;
  return "neurowire_out";
}

struct RunFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> snapshot_every;
  bool literal_noise = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--out", f.out, "Output root directory (default $NEUROWIRE_OUT_ROOT or ./neurowire_out)");
  cmd->add_option("--snapshot-every", f.snapshot_every, "Field snapshot interval in steps (0: final only)");
  cmd->add_flag("--literal-noise", f.literal_noise, "Use sigma*dt instead of sigma*sqrt(dt) for the noise increment");
}

void apply_run_flags(ScenarioConfig& config, const RunFlags& f) {
  if (f.seed) config.seed = *f.seed;
  if (f.snapshot_every) config.output.snapshot_every = *f.snapshot_every;
  if (f.literal_noise) config.literal_noise = true;
  config.validate();
}

int execute_run(ScenarioConfig config, const RunFlags& f, const std::string& label) {
  apply_run_flags(config, f);
  const std::string hash = io::config_hash(config);
  const fs::path dir = config.output.directory.empty() || !f.out.empty()
                           ? output_root(f.out) / (label + "-" + hash)
                           : fs::path(config.output.directory);
  io::preflight_output_dir(dir);
  note("running " + label + " (seed " + std::to_string(config.seed) + ", " + std::to_string(config.step_count()) +
       " steps) -> " + dir.string());

  io::RunManifest manifest;
  manifest.config_hash = hash;
  manifest.seed = config.seed;
  manifest.version = NEUROWIRE_VERSION;
  manifest.started_at = io::utc_now();
  const RunArtifact artifact = run_simulation(config);
  manifest = io::emit_outputs(artifact, manifest, dir);

  const auto& s = artifact.summary;
  note("cones " + std::to_string(s.cones.size()) + ", active at end " + std::to_string(s.final_active_count) +
       ", connections " + std::to_string(s.connection_count) + ", mean path length " +
       io::format_double(s.mean_path_length));
  std::cout << dir.string() << '\n';
  return kOk;
}

struct SweepFlags {
  std::vector<double> epsilons;
  bool log_sweep = false;
  double amplitude = 1.0;
  double force = 1.0;
  std::optional<double> trace_epsilon;
  double trace_horizon = 50.0;
  double trace_dt = 1e-3;
  std::string out;
};

int execute_sweep(const SweepFlags& f) {
  std::vector<double> eps = f.epsilons;
  if (f.log_sweep) {
    for (int k = 1; k <= 6; ++k) eps.push_back(std::pow(10.0, -k));
  }
  if (eps.empty()) eps = {0.05, 0.047, 0.044, 0.041, 0.038};
  const fs::path dir = output_root(f.out) / "epsilon-sweep";
  io::preflight_output_dir(dir);

  const auto rows = sweep_epsilon(eps, f.amplitude, f.force);
  io::write_file(dir / "sweep.csv", io::sweep_csv(rows));
  io::LineSeries series{"v_eps", {}, {}};
  for (const auto& r : rows) {
    series.x.push_back(r.epsilon);
    series.y.push_back(r.v_eps);
  }
  io::LinePlotOptions plot{"asymptotic speed", "epsilon", "v_eps", f.log_sweep, true};
  io::write_file(dir / "sweep.svg", io::render_line_plot_svg({series}, plot));
  for (const auto& r : rows) {
    std::cout << io::format_double(r.epsilon) << ',' << io::format_double(r.v_eps) << '\n';
  }

  if (f.trace_epsilon) {
    const auto state = DeterministicState::at_rest(0.0, 0.0, *f.trace_epsilon, f.amplitude, f.force);
    const auto trace = simulate_deterministic(state, f.trace_horizon, f.trace_dt);
    io::write_file(dir / "speed_trace.csv", io::speed_trace_csv(trace));
    io::LineSeries speed{"speed", {trace.times.begin(), trace.times.begin() + static_cast<std::ptrdiff_t>(trace.speed.size())},
                         trace.speed};
    const double v = asymptotic_speed(*f.trace_epsilon, f.amplitude, f.force).v_eps;
    io::LineSeries limit{"v_eps", {trace.times.front(), trace.times.back()}, {v, v}};
    io::write_file(dir / "speed_trace.svg",
                   io::render_line_plot_svg({speed, limit}, {"transient speed", "t", "speed", false, false}));
  }
  note("wrote " + dir.string());
  return kOk;
}

int execute_validate(bool quick) {
  const auto results = run_all_checks(!quick);
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << io::format_double(std::round(r.seconds * 100) / 100)
              << " s)\n";
    if (!quiet) {
      for (const auto& n : r.notes) std::cout << "    " << n << '\n';
    }
  }
  return all ? kOk : kCheckFailed;
}

int execute_replay(const std::string& input, const std::string& output, double half_length, const std::string& title) {
  const auto rows = io::parse_trajectory_csv(io::read_file(input));
  const fs::path target = output.empty() ? fs::path(input).replace_extension(".svg") : fs::path(output);
  io::write_file(target, io::render_trajectory_svg(rows, half_length, title));
  std::cout << target.string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chemotactic growth-cone simulator"};
  app.set_version_flag("--version", NEUROWIRE_VERSION);
  app.add_flag("--quiet", quiet, "Suppress progress messages");
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "Run a scenario from a JSON config");
  run->add_option("--config", run_flags.config_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  add_run_flags(run, run_flags);

  RunFlags exp_flags;
  int which = 0;
  ExperimentOverrides overrides;
  auto* experiment = app.add_subcommand("experiment", "Run one of the preset experiments");
  experiment->add_option("id", which, "Experiment 1-4")->required()->check(CLI::Range(1, 4));
  experiment->add_option("--sigma", overrides.sigma, "Noise amplitude");
  experiment->add_option("--epsilon", overrides.epsilon, "Mollifier width");
  experiment->add_option("--beta", overrides.beta, "Attraction strength");
  experiment->add_option("--gamma", overrides.gamma, "Repulsion strength");
  experiment->add_option("--cones-per-soma", overrides.cones_per_soma, "Growth cones per soma");
  experiment->add_option("--horizon", overrides.horizon, "Final time");
  add_run_flags(experiment, exp_flags);

  SweepFlags sweep_flags;
  auto* sweep = app.add_subcommand("epsilon-sweep", "Asymptotic speed of the deterministic walker against epsilon");
  sweep->add_option("--eps", sweep_flags.epsilons, "Epsilon values");
  sweep->add_flag("--log", sweep_flags.log_sweep, "Add the decades 1e-1 ... 1e-6");
  sweep->add_option("--amplitude", sweep_flags.amplitude, "Emission amplitude a");
  sweep->add_option("--force", sweep_flags.force, "Constant force u");
  sweep->add_option("--trace", sweep_flags.trace_epsilon, "Also integrate the transient at this epsilon");
  sweep->add_option("--trace-horizon", sweep_flags.trace_horizon, "Final time of the transient");
  sweep->add_option("--trace-dt", sweep_flags.trace_dt, "Time step of the transient");
  sweep->add_option("--out", sweep_flags.out, "Output root directory");

  bool quick = false;
  auto* validate = app.add_subcommand("validate", "Run the oracle and property checks");
  validate->add_flag("--quick", quick, "Skip the stochastic experiment comparisons");

  std::string replay_input;
  std::string replay_output;
  std::string replay_title;
  double replay_half_length = 3.0;
  auto* replay = app.add_subcommand("replay-plot", "Render a trajectory CSV as SVG");
  replay->add_option("csv", replay_input, "trajectory.csv")->required()->check(CLI::ExistingFile);
  replay->add_option("-o,--output", replay_output, "SVG path (default: next to the CSV)");
  replay->add_option("--half-length", replay_half_length, "Domain half length");
  replay->add_option("--title", replay_title, "Plot title");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      return execute_run(io::parse_config_file(run_flags.config_path), run_flags, "run");
    }
    if (*experiment) {
      const auto config = build_experiment(which, overrides, exp_flags.seed.value_or(1));
      return execute_run(config, exp_flags, "exp" + std::to_string(which));
    }
    if (*sweep) return execute_sweep(sweep_flags);
    if (*validate) return execute_validate(quick);
    if (*replay) return execute_replay(replay_input, replay_output, replay_half_length, replay_title);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << " (line " << e.line() << ", column " << e.column() << ")\n";
    return kBadInput;
  } catch (const ValidationError& e) {
    std::cerr << "error: invalid " << e.what() << '\n';
    return kBadInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericFailure;
  }
  return kOk;
}
