#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "neurowire/field.hpp"
#include "neurowire/grid.hpp"
#include "neurowire/rng.hpp"

namespace neurowire {

enum class WalkerKind { Soma, GrowthCone };

std::string to_string(WalkerKind kind);

/// A soma or a growth cone. Walkers are stored so that `id` equals the index.
struct Walker {
  std::size_t id = 0;
  WalkerKind kind = WalkerKind::GrowthCone;
  Vec2 position;
  std::optional<std::size_t> origin_soma;
  bool active = true;
  double activation_time = 0.0;
  double sigma = 0.0;
  bool has_exited_origin = false;

  bool is_cone() const { return kind == WalkerKind::GrowthCone; }
  /// Cone that has been switched on by time t and not stopped.
  bool is_moving_at(double t) const;
  /// Soma, or a cone that is moving at t.
  bool emits_at(double t) const;
  bool started_by(double t) const;
};

struct InactivationPolicy {
  double threshold = 0.1;
};

enum class ContactKind { ConeSoma, ConeCone };

std::string to_string(ContactKind kind);

struct ContactEvent {
  double time = 0.0;
  std::size_t id_a = 0;
  std::size_t id_b = 0;
  ContactKind kind = ContactKind::ConeCone;

  friend bool operator==(const ContactEvent&, const ContactEvent&) = default;
};

/// b_{jk}(c, t) for walker j and species k.
using WeightFn =
    std::function<double(const Walker& walker, std::size_t species, std::span<const double> c, double t)>;

/// σ √Δt Z with Z two standard normals (Z itself under literal_noise).
/// The stream always advances by exactly two draws.
Vec2 brownian_increment(RngStream& stream, double dt, double sigma, bool literal_noise = false);

/// Σ_k b_jk(c(X_j), t) ∇c_k(X_j). Throws ContractViolation unless the walker
/// is a moving growth cone at t.
Vec2 drift_eval(const Walker& walker, const FieldState& fields, const PeriodicGrid& grid,
                const WeightFn& weights, double t);

struct StepOptions {
  bool literal_noise = false;
  std::size_t step_index = 0;
};

/// X⁺ = wrap(X + drift Δt + ΔW) for every moving cone; every stream advances
/// by two draws regardless. Non-finite drift raises NumericError.
void euler_maruyama_step(std::span<Walker> walkers, const FieldState& fields,
                         const PeriodicGrid& grid, const WeightFn& weights, double t, double dt,
                         std::span<RngStream> streams, const StepOptions& options = {});

/// Stops cones that came within `threshold` of a soma or another started cone,
/// using minimal-image distances. A cone's own soma only counts after the cone
/// first left it. Returns one event per contact, in ascending cone id.
std::vector<ContactEvent> proximity_inactivation(std::span<Walker> walkers, const PeriodicGrid& grid,
                                                 const InactivationPolicy& policy, double t);

}  // namespace neurowire
