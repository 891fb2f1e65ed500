#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "neurowire/walker.hpp"

namespace neurowire {

/// One summand of a coefficient function.
struct CoefficientTerm {
  enum class Kind { Constant, ArctanConcentration, ArctanTime };

  Kind kind = Kind::Constant;
  double scale = 0.0;
  double slope = 0.0;
  double shift = 0.0;
  /// Concentration index used by ArctanConcentration.
  std::size_t component = 0;
  /// Outer factor on the arctan argument.
  double gain = 1.0;

  static CoefficientTerm constant(double value) { return {Kind::Constant, value, 0.0, 0.0, 0, 1.0}; }
  /// scale · arctan(gain · (slope · c[component] + shift))
  static CoefficientTerm arctan_of_concentration(double scale, double slope, double shift,
                                                 std::size_t component, double gain = 1.0) {
    return {Kind::ArctanConcentration, scale, slope, shift, component, gain};
  }
  /// scale · arctan(gain · (slope · t + shift))
  static CoefficientTerm arctan_of_time(double scale, double slope, double shift, double gain = 1.0) {
    return {Kind::ArctanTime, scale, slope, shift, 0, gain};
  }

  double operator()(std::span<const double> c, double t) const;
  friend bool operator==(const CoefficientTerm&, const CoefficientTerm&) = default;
};

/// Sum of terms; bounded and Lipschitz in (c, t) by construction.
struct CoefficientFunction {
  std::vector<CoefficientTerm> terms;

  double operator()(std::span<const double> c, double t) const;
  /// Closed range of values for any c and t in [0, horizon].
  std::pair<double, double> range(double horizon) const;
  /// Lipschitz constant with respect to c (sum of |scale · slope|).
  double lipschitz_in_concentration() const;
  bool is_zero() const;
  friend bool operator==(const CoefficientFunction&, const CoefficientFunction&) = default;
};

inline constexpr std::size_t kAttractive = 0;
inline constexpr std::size_t kRepulsive = 1;
inline constexpr std::size_t kTrigger = 2;
inline constexpr std::size_t kSpeciesCount = 3;

/// Index 0 is the growth-cone row, index 1 the soma row.
inline std::size_t kind_index(WalkerKind kind) { return kind == WalkerKind::GrowthCone ? 0 : 1; }

/// Emission a_i and weight b_k functions per walker kind.
struct CoefficientSpec {
  /// emission[kind][species]
  std::array<std::array<CoefficientFunction, kSpeciesCount>, 2> emission;
  /// weight[kind][species]
  std::array<std::array<CoefficientFunction, kSpeciesCount>, 2> weight;

  /// Throws InputError if a soma weight is not identically zero.
  void validate() const;
  friend bool operator==(const CoefficientSpec&, const CoefficientSpec&) = default;
};

/// The three-species attract/repel/trigger model with strengths β and γ.
CoefficientSpec base_coefficients(double beta, double gamma);

/// Dense-network variant: cone attractive emission scaled 15 → 5 on all three
/// terms and soma repulsive emission raised to 5.
CoefficientSpec dense_network_coefficients(double beta, double gamma);

/// All functions identically zero.
CoefficientSpec zero_coefficients();

double eval_emission(const CoefficientSpec& spec, std::size_t species, const Walker& walker,
                     std::span<const double> c, double t);

double eval_weight(const CoefficientSpec& spec, const Walker& walker, std::size_t species,
                   std::span<const double> c, double t);

}  // namespace neurowire
