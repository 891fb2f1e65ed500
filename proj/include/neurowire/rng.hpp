#pragma once

#include <array>
#include <cstdint>

namespace neurowire {

/// Counter-based Gaussian stream: draw k of (seed, stream_id) is a pure
/// function of the triple, so results do not depend on platform or on the
/// order in which streams are consumed.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::uint64_t counter = 0;

  /// 64 random bits for position `counter`; does not advance.
  std::uint64_t bits_at(std::uint64_t position) const;
  /// Uniform in the open interval (0, 1); advances by one.
  double next_uniform();
  /// Two independent standard normals (Box-Muller); advances by two.
  std::array<double, 2> next_normal_pair();
};

/// Reserved stream identifiers for non-walker randomness.
inline constexpr std::uint64_t kLayoutStream = 0x8000'0000'0000'0001ULL;

}  // namespace neurowire
