#include "neurowire/walker.hpp"

#include <cmath>
#include <sstream>

#include "neurowire/errors.hpp"

namespace neurowire {

namespace {
// Activation times are compared against accumulated step times.
constexpr double kTimeSlack = 1e-9;
}  // namespace

std::string to_string(WalkerKind kind) {
  return kind == WalkerKind::Soma ? "soma" : "growth_cone";
}

std::string to_string(ContactKind kind) {
  return kind == ContactKind::ConeSoma ? "cone-soma" : "cone-cone";
}

bool Walker::started_by(double t) const { return t >= activation_time - kTimeSlack; }

bool Walker::is_moving_at(double t) const { return is_cone() && active && started_by(t); }

bool Walker::emits_at(double t) const { return !is_cone() || is_moving_at(t); }

Vec2 brownian_increment(RngStream& stream, double dt, double sigma, bool literal_noise) {
  const auto z = stream.next_normal_pair();
  const double scale = literal_noise ? sigma : sigma * std::sqrt(dt);
  return {scale * z[0], scale * z[1]};
}

Vec2 drift_eval(const Walker& walker, const FieldState& fields, const PeriodicGrid& grid,
                const WeightFn& weights, double t) {
  if (!walker.is_moving_at(t)) {
    throw ContractViolation("drift_eval: walker " + std::to_string(walker.id) +
                            " is not a moving growth cone");
  }
  std::vector<double> c;
  std::vector<Vec2> grad;
  eval_field_and_gradient(fields, grid, walker.position, c, grad);
  Vec2 drift;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double b = weights(walker, k, c, t);
    if (b != 0.0) drift += b * grad[k];
  }
  return drift;
}

void euler_maruyama_step(std::span<Walker> walkers, const FieldState& fields,
                         const PeriodicGrid& grid, const WeightFn& weights, double t, double dt,
                         std::span<RngStream> streams, const StepOptions& options) {
  if (!(dt > 0.0)) throw DomainError("euler_maruyama_step: dt must be positive");
  if (streams.size() != walkers.size()) throw InputError("euler_maruyama_step: one stream per walker");
  for (std::size_t j = 0; j < walkers.size(); ++j) {
    Walker& w = walkers[j];
    const Vec2 noise = brownian_increment(streams[j], dt, w.sigma, options.literal_noise);
    if (!w.is_moving_at(t)) continue;
    const Vec2 drift = drift_eval(w, fields, grid, weights, t);
    if (!std::isfinite(drift.x) || !std::isfinite(drift.y)) {
      std::ostringstream msg;
      msg << "euler_maruyama_step: non-finite drift for walker " << w.id << " at step "
          << options.step_index << " (t = " << t << ")";
      throw NumericError(msg.str());
    }
    w.position = grid.wrap(w.position + dt * drift + noise);
  }
}

std::vector<ContactEvent> proximity_inactivation(std::span<Walker> walkers, const PeriodicGrid& grid,
                                                 const InactivationPolicy& policy, double t) {
  if (!(policy.threshold > 0.0)) throw DomainError("proximity_inactivation: threshold must be positive");
  for (std::size_t j = 0; j < walkers.size(); ++j) {
    if (walkers[j].id != j) throw InputError("proximity_inactivation: walker ids must equal their index");
  }
  const double r = policy.threshold;

  for (auto& w : walkers) {
    if (w.is_moving_at(t) && !w.has_exited_origin && w.origin_soma) {
      if (grid.periodic_distance(w.position, walkers[*w.origin_soma].position) > r) {
        w.has_exited_origin = true;
      }
    }
  }

  // Decisions use the activity flags from before this call.
  std::vector<bool> was_active(walkers.size());
  for (std::size_t j = 0; j < walkers.size(); ++j) was_active[j] = walkers[j].active;

  std::vector<ContactEvent> events;
  for (auto& cone : walkers) {
    if (!cone.is_cone() || !was_active[cone.id] || !cone.active || !cone.started_by(t)) continue;
    bool stopped = false;
    for (const auto& soma : walkers) {
      if (soma.is_cone()) continue;
      if (cone.origin_soma && *cone.origin_soma == soma.id && !cone.has_exited_origin) continue;
      if (grid.periodic_distance(cone.position, soma.position) < r) {
        cone.active = false;
        events.push_back({t, cone.id, soma.id, ContactKind::ConeSoma});
        stopped = true;
        break;
      }
    }
    if (stopped) continue;
    for (auto& other : walkers) {
      if (!other.is_cone() || other.id == cone.id || !other.started_by(t)) continue;
      if (grid.periodic_distance(cone.position, other.position) < r) {
        cone.active = false;
        if (other.active) other.active = false;
        events.push_back({t, std::min(cone.id, other.id), std::max(cone.id, other.id),
                          ContactKind::ConeCone});
        break;
      }
    }
  }
  return events;
}

}  // namespace neurowire
