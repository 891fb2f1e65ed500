#include "neurowire/simulation.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "neurowire/errors.hpp"

namespace neurowire {

namespace {

void record(std::vector<TrajectoryRow>& rows, std::size_t step, double t,
            const std::vector<Walker>& walkers) {
  for (const auto& w : walkers) rows.push_back({step, t, w.id, w.kind, w.position, w.active});
}

}  // namespace

RunArtifact run_simulation(const ScenarioConfig& config, const RunOptions& options) {
  config.validate();
  const PeriodicGrid grid(config.half_length, config.spacing);
  const SparseMatrix mass = assemble_mass(grid);
  const SparseMatrix laplacian = assemble_laplacian(grid);
  std::vector<ImplicitEulerStepper> steppers;
  for (const auto& s : config.species) {
    SparseMatrix b = s.D * laplacian + s.lambda * mass;
    steppers.emplace_back(grid, mass, std::move(b), config.dt, options.backend);
    steppers.back().set_residual_check(options.check_residual);
  }
  const SourceAssembler sources(grid, Mollifier{config.epsilon});
  const CoefficientSpec& coeffs = config.coefficients;
  const WeightFn weights = [&coeffs](const Walker& w, std::size_t k, std::span<const double> c, double t) {
    return eval_weight(coeffs, w, k, c, t);
  };

  RunArtifact art;
  art.config = config;
  std::vector<Walker> walkers = build_walkers(config);
  art.initial_walkers = walkers;
  std::vector<RngStream> streams;
  for (const auto& w : walkers) streams.push_back({config.seed, w.id, 0});

  const std::size_t n = config.species.size();
  FieldState fields = FieldState::zeros(n, grid.node_count());
  for (std::size_t i = 0; i < n; ++i) fields.coefficients[i].setConstant(config.initial_concentration[i]);

  const std::size_t steps = config.step_count();
  art.trajectory.reserve((steps + 1) * walkers.size());
  record(art.trajectory, 0, 0.0, walkers);
  auto count_active = [&walkers] {
    std::size_t k = 0;
    for (const auto& w : walkers) k += (w.is_cone() && w.active) ? 1 : 0;
    return k;
  };
  art.active_cone_counts.push_back(count_active());

  const InactivationPolicy policy{config.contact_threshold};
  std::vector<Eigen::VectorXd> loads(n, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.node_count())));
  std::vector<double> c;
  std::vector<double> amplitude(n);
  // Somas never move, so their unit loads are assembled once.
  std::vector<Eigen::VectorXd> soma_loads(walkers.size());
  const std::size_t every = config.output.snapshot_every;

  for (std::size_t step = 0; step < steps; ++step) {
    const double t = static_cast<double>(step) * config.dt;
    const double t_next = static_cast<double>(step + 1) * config.dt;

    euler_maruyama_step(walkers, fields, grid, weights, t, config.dt, streams,
                        StepOptions{config.literal_noise, step});
    auto events = proximity_inactivation(walkers, grid, policy, t_next);
    art.events.insert(art.events.end(), events.begin(), events.end());

    for (auto& f : loads) f.setZero();
    for (const auto& w : walkers) {
      if (!w.emits_at(t_next)) continue;
      // Emission rates read the field before this step's update.
      c = eval_field(fields, grid, w.position);
      for (std::size_t i = 0; i < n; ++i) amplitude[i] = eval_emission(coeffs, i, w, c, t_next);
      if (w.is_cone()) {
        sources.accumulate(w.position, amplitude, loads);
      } else {
        auto& unit = soma_loads[w.id];
        if (unit.size() == 0) unit = sources.unit_load(w.position);
        for (std::size_t i = 0; i < n; ++i) {
          if (amplitude[i] != 0.0) loads[i] += amplitude[i] * unit;
        }
      }
      if (options.record_emissions) {
        EmissionRecord rec{step + 1, w.id, {}};
        for (std::size_t i = 0; i < n && i < kSpeciesCount; ++i) rec.amplitude[i] = amplitude[i];
        art.emissions.push_back(rec);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      fields.coefficients[i] = steppers[i].step(fields.coefficients[i], loads[i]);
      if (!fields.coefficients[i].allFinite()) {
        std::ostringstream msg;
        msg << "run_simulation: non-finite concentration of species " << i << " at step " << step + 1;
        throw NumericError(msg.str());
      }
    }
    fields.time = t_next;

    record(art.trajectory, step + 1, t_next, walkers);
    art.active_cone_counts.push_back(count_active());
    if (every > 0 && (step + 1) % every == 0 && step + 1 != steps) {
      art.snapshots.push_back({step + 1, fields});
    }
  }
  art.snapshots.push_back({steps, fields});
  art.summary = summarize(art.trajectory, grid, art.events.size());
  return art;
}

RunSummary summarize(const std::vector<TrajectoryRow>& trajectory, const PeriodicGrid& grid,
                     std::size_t connection_count) {
  std::map<std::size_t, ConeSummary> cones;
  std::map<std::size_t, Vec2> last;
  for (const auto& row : trajectory) {
    if (row.kind != WalkerKind::GrowthCone) continue;
    auto [it, inserted] = cones.try_emplace(row.walker_id);
    it->second.walker_id = row.walker_id;
    it->second.active_at_end = row.active;
    if (!inserted) {
      const Vec2 step = grid.minimal_image(row.position - last[row.walker_id]);
      it->second.path_length += step.norm();
      it->second.net_displacement += step;
    }
    last[row.walker_id] = row.position;
  }
  RunSummary summary;
  summary.connection_count = connection_count;
  double tort_sum = 0.0;
  std::size_t tort_count = 0;
  for (auto& [id, cone] : cones) {
    const double net = cone.net_displacement.norm();
    cone.tortuosity = net > 0.0 ? cone.path_length / net : std::numeric_limits<double>::infinity();
    if (net > 0.0) {
      tort_sum += cone.tortuosity;
      ++tort_count;
    }
    summary.mean_path_length += cone.path_length;
    summary.final_active_count += cone.active_at_end ? 1 : 0;
    summary.cones.push_back(cone);
  }
  if (!summary.cones.empty()) summary.mean_path_length /= static_cast<double>(summary.cones.size());
  summary.mean_tortuosity = tort_count > 0 ? tort_sum / static_cast<double>(tort_count) : 0.0;
  return summary;
}

}  // namespace neurowire
