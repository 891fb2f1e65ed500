#include "neurowire/rng.hpp"

#include <cmath>
#include <numbers>

namespace neurowire {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::uint64_t RngStream::bits_at(std::uint64_t position) const {
  const std::uint64_t key = splitmix64(seed ^ splitmix64(stream_id + 0x632BE59BD9B4E019ULL));
  return splitmix64(key ^ splitmix64(position));
}

double RngStream::next_uniform() {
  return to_open_unit(bits_at(counter++));
}

std::array<double, 2> RngStream::next_normal_pair() {
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(angle), r * std::sin(angle)};
}

}  // namespace neurowire
