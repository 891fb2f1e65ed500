#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "neurowire/errors.hpp"
#include "neurowire/io/config.hpp"
#include "neurowire/io/format.hpp"
#include "neurowire/io/output.hpp"
#include "neurowire/io/svg.hpp"
#include "neurowire/scenario.hpp"
#include "neurowire/simulation.hpp"

using namespace neurowire;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("neurowire_test_io_" + name);
  fs::remove_all(dir);
  return dir;
}

ScenarioConfig small_run(std::uint64_t seed) {
  auto config = build_experiment(3, {.horizon = 0.05}, seed);
  config.spacing = 0.1;
  config.dt = 0.005;
  config.output.snapshot_every = 5;
  return config;
}

}  // namespace

TEST(Format, ShortestRoundTrip) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 2000; ++k) {
    const double v = u(gen) * std::pow(10.0, (k % 40) - 20);
    EXPECT_EQ(std::stod(io::format_double(v)), v);
  }
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(1.0), "1");
  EXPECT_EQ(io::format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(io::format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(io::format_double(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Format, Sha256KnownVectors) {
  EXPECT_EQ(io::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(io::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Config, MinimalExperimentDocument) {
  const auto config = io::parse_config(R"({"experiment": 3, "epsilon": 0.02, "seed": 7})");
  const auto preset = build_experiment(3, {.epsilon = 0.02}, 7);
  EXPECT_EQ(config.epsilon, 0.02);
  EXPECT_EQ(config.seed, 7u);
  EXPECT_EQ(config.sigma, preset.sigma);
  EXPECT_EQ(config.dt, 0.001);
  EXPECT_EQ(config.half_length, 3.0);
  EXPECT_EQ(config.spacing, 0.05);
}

TEST(Config, SemanticErrorsNameTheField) {
  try {
    io::parse_config(R"({"dt": -0.001})");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "dt");
  }
  EXPECT_THROW(io::parse_config(R"({"dtt": 0.001})"), ValidationError);
}

TEST(Config, SyntaxErrorsCarryPosition) {
  try {
    io::parse_config("{\n  \"dt\": 0.001,\n  \"sigma\": ,\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_GT(e.column(), 0u);
  }
}

TEST(Config, SerializeRoundTrip) {
  for (int which = 1; which <= 4; ++which) {
    const auto config = build_experiment(which, {}, 11);
    EXPECT_EQ(io::parse_config(io::serialize_config(config)), config) << which;
  }
}

TEST(Config, HashIgnoresOutputDirectory) {
  auto a = build_experiment(2, {}, 5);
  auto b = a;
  b.output.directory = "/somewhere/else";
  EXPECT_EQ(io::config_hash(a), io::config_hash(b));
  EXPECT_EQ(io::config_hash(a).size(), 16u);
  b.seed = 6;
  EXPECT_NE(io::config_hash(a), io::config_hash(b));
}

TEST(Output, TrajectoryCsvRoundTrip) {
  const auto artifact = run_simulation(small_run(2));
  const std::string csv = io::trajectory_csv(artifact.trajectory);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), io::kTrajectoryHeader);
  std::size_t lines = 0;
  for (char c : csv) lines += (c == '\n');
  EXPECT_EQ(lines, artifact.trajectory.size() + 1);
  const auto parsed = io::parse_trajectory_csv(csv);
  ASSERT_EQ(parsed.size(), artifact.trajectory.size());
  for (std::size_t k = 0; k < parsed.size(); ++k) {
    EXPECT_EQ(parsed[k].step, artifact.trajectory[k].step);
    EXPECT_EQ(parsed[k].walker_id, artifact.trajectory[k].walker_id);
    EXPECT_EQ(parsed[k].position.x, artifact.trajectory[k].position.x);
    EXPECT_EQ(parsed[k].position.y, artifact.trajectory[k].position.y);
    EXPECT_EQ(parsed[k].active, artifact.trajectory[k].active);
  }
}

TEST(Output, EmitIsDeterministicAndVerifiable) {
  const auto config = small_run(4);
  const fs::path a = scratch_dir("a");
  const fs::path b = scratch_dir("b");
  io::RunManifest m{io::config_hash(config), config.seed, "test", io::utc_now(), {}, {}};
  const auto ma = io::emit_outputs(run_simulation(config), m, a);
  const auto mb = io::emit_outputs(run_simulation(config), m, b);
  EXPECT_TRUE(fs::exists(a / "contacts.jsonl"));
  ASSERT_EQ(ma.files.size(), mb.files.size());
  for (std::size_t k = 0; k < ma.files.size(); ++k) {
    EXPECT_EQ(ma.files[k].name, mb.files[k].name);
    EXPECT_EQ(ma.files[k].sha256, mb.files[k].sha256) << ma.files[k].name;
    EXPECT_EQ(io::read_file(a / ma.files[k].name), io::read_file(b / mb.files[k].name));
  }
  EXPECT_TRUE(io::verify_manifest(a).empty());
  io::write_file(a / "summary.json", "{}");
  const auto bad = io::verify_manifest(a);
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_EQ(bad[0], "summary.json");
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Output, EmptyContactsStillWritten) {
  EXPECT_EQ(io::contacts_jsonl({}), "");
}

TEST(Output, PreflightRejectsUnwritable) {
  const fs::path blocker = scratch_dir("blocker");
  io::write_file(blocker, "not a directory");
  EXPECT_THROW(io::preflight_output_dir(blocker / "sub"), IoError);
  fs::remove(blocker);
  EXPECT_THROW(io::read_file(blocker), IoError);
}

TEST(Svg, TrajectoryAndLinePlot) {
  const auto artifact = run_simulation(small_run(2));
  const std::string svg = io::render_trajectory_svg(artifact.trajectory, 3.0, "demo");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("demo"), std::string::npos);
  const std::string plot = io::render_line_plot_svg({{"v", {1e-3, 1e-2, 1e-1}, {0.3, 0.4, 0.5}}},
                                                    {"speed", "eps", "v", true, true});
  EXPECT_NE(plot.find("<polyline"), std::string::npos);
  EXPECT_NE(plot.find("speed"), std::string::npos);
}
