#include "neurowire/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "neurowire/errors.hpp"

namespace neurowire {

using std::numbers::pi;

double CoefficientTerm::operator()(std::span<const double> c, double t) const {
  switch (kind) {
    case Kind::Constant: return scale;
    case Kind::ArctanConcentration: return scale * std::atan(gain * (slope * c[component] + shift));
    case Kind::ArctanTime: return scale * std::atan(gain * (slope * t + shift));
  }
  return 0.0;
}

double CoefficientFunction::operator()(std::span<const double> c, double t) const {
  double v = 0.0;
  for (const auto& term : terms) v += term(c, t);
  return v;
}

std::pair<double, double> CoefficientFunction::range(double horizon) const {
  double lo = 0.0;
  double hi = 0.0;
  for (const auto& term : terms) {
    switch (term.kind) {
      case CoefficientTerm::Kind::Constant:
        lo += term.scale;
        hi += term.scale;
        break;
      case CoefficientTerm::Kind::ArctanConcentration: {
        const double half = std::abs(term.scale) * pi / 2.0;
        lo -= half;
        hi += half;
        break;
      }
      case CoefficientTerm::Kind::ArctanTime: {
        const double a = term.scale * std::atan(term.gain * term.shift);
        const double b = term.scale * std::atan(term.gain * (term.slope * horizon + term.shift));
        lo += std::min(a, b);
        hi += std::max(a, b);
        break;
      }
    }
  }
  return {lo, hi};
}

double CoefficientFunction::lipschitz_in_concentration() const {
  double l = 0.0;
  for (const auto& term : terms) {
    if (term.kind == CoefficientTerm::Kind::ArctanConcentration) l += std::abs(term.scale * term.gain * term.slope);
  }
  return l;
}

bool CoefficientFunction::is_zero() const {
  return std::all_of(terms.begin(), terms.end(), [](const CoefficientTerm& t) { return t.scale == 0.0; });
}

void CoefficientSpec::validate() const {
  for (std::size_t k = 0; k < kSpeciesCount; ++k) {
    if (!weight[1][k].is_zero()) throw InputError("coefficients: soma weights must be identically zero");
  }
  for (const auto& row : emission) {
    for (const auto& f : row) {
      for (const auto& term : f.terms) {
        if (term.kind == CoefficientTerm::Kind::ArctanConcentration && term.component >= kSpeciesCount) {
          throw InputError("coefficients: concentration component out of range");
        }
      }
    }
  }
}

namespace {

// Switch from repulsion- to attraction-driven guidance around t = 1.3:
// (s/π) arctan(0.3 (10t - 13)).
CoefficientTerm guidance_switch(double strength) {
  return CoefficientTerm::arctan_of_time(strength / pi, 10.0, -13.0, 0.3);
}

CoefficientFunction cone_attractive_emission(double scale) {
  return {{CoefficientTerm::arctan_of_concentration(scale, 2.25, -3.5, kTrigger),
           CoefficientTerm::constant(scale * pi / 2.0),
           CoefficientTerm::arctan_of_time(scale, 2.0, 0.0)}};
}

}  // namespace

CoefficientSpec base_coefficients(double beta, double gamma) {
  CoefficientSpec spec;
  auto& cone = spec.emission[kind_index(WalkerKind::GrowthCone)];
  auto& soma = spec.emission[kind_index(WalkerKind::Soma)];
  cone[kAttractive] = cone_attractive_emission(15.0);
  cone[kTrigger] = {{CoefficientTerm::arctan_of_concentration(20.0, 2.25, -3.0, kAttractive),
                     CoefficientTerm::constant(7.5 * pi),
                     CoefficientTerm::arctan_of_time(15.0, 2.0, 0.0)}};
  soma[kAttractive] = {{CoefficientTerm::arctan_of_concentration(5.0, 0.5, 0.0, kTrigger)}};
  soma[kRepulsive] = {{CoefficientTerm::constant(3.0)}};

  auto& w = spec.weight[kind_index(WalkerKind::GrowthCone)];
  w[kAttractive] = {{guidance_switch(beta), CoefficientTerm::constant(beta / 2.0)}};
  w[kRepulsive] = {{guidance_switch(gamma), CoefficientTerm::constant(-gamma / 2.0)}};
  return spec;
}

CoefficientSpec dense_network_coefficients(double beta, double gamma) {
  CoefficientSpec spec = base_coefficients(beta, gamma);
  spec.emission[kind_index(WalkerKind::GrowthCone)][kAttractive] = cone_attractive_emission(5.0);
  spec.emission[kind_index(WalkerKind::Soma)][kRepulsive] = {{CoefficientTerm::constant(5.0)}};
  return spec;
}

CoefficientSpec zero_coefficients() { return {}; }

double eval_emission(const CoefficientSpec& spec, std::size_t species, const Walker& walker,
                     std::span<const double> c, double t) {
  return spec.emission[kind_index(walker.kind)].at(species)(c, t);
}

double eval_weight(const CoefficientSpec& spec, const Walker& walker, std::size_t species,
                   std::span<const double> c, double t) {
  if (walker.kind == WalkerKind::Soma) return 0.0;
  return spec.weight[kind_index(walker.kind)].at(species)(c, t);
}

}  // namespace neurowire
