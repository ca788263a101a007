#include "dlcpriv/rng.hpp"

#include <cmath>
#include <numbers>

namespace dlcpriv::rng {

Stream::Stream(std::uint64_t seed, std::string_view label, std::uint64_t substream) noexcept
    : key_(mix64(mix64(seed) ^ label_hash(label)) ^ mix64(substream ^ 0x5851f42d4c957f2dULL)) {}

double Stream::normal(std::uint64_t counter) const noexcept {
  // Two independent words per counter; u1 in (0, 1] keeps the log finite.
  const std::uint64_t w1 = mix64(key_ ^ mix64(2 * counter));
  const std::uint64_t w2 = mix64(key_ ^ mix64(2 * counter + 1));
  const double u1 = (static_cast<double>(w1 >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(w2 >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Stream Stream::substream(std::uint64_t index) const noexcept {
  return Stream(mix64(key_ + 0x632be59bd9b4e019ULL) ^ mix64(index));
}

}  // namespace dlcpriv::rng
