#pragma once

#include <cstdint>
#include <string_view>

namespace dlcpriv::rng {

/// 64-bit FNV-1a; used to turn purpose labels into stream keys.
constexpr std::uint64_t label_hash(std::string_view label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// SplitMix64 finalizer (a bijection on 64-bit words).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based random stream keyed by (master seed, purpose label,
/// substream index). Every draw is a pure function of the key and an
/// explicit counter, so results do not depend on evaluation order or on
/// how work is split across threads.
///
/// Standard library distributions are deliberately not used: their output
/// is implementation-defined, which would break bit-exact reproducibility
/// across toolchains.
class Stream {
 public:
  Stream(std::uint64_t seed, std::string_view label, std::uint64_t substream = 0) noexcept;

  std::uint64_t key() const noexcept { return key_; }

  std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix64(key_ ^ mix64(counter));
  }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }
  /// Uniform on [lo, hi).
  double uniform(std::uint64_t counter, double lo, double hi) const noexcept {
    return lo + (hi - lo) * uniform(counter);
  }
  /// Standard normal via Box-Muller on a pair of derived words.
  double normal(std::uint64_t counter) const noexcept;
  bool bernoulli(std::uint64_t counter, double p) const noexcept { return uniform(counter) < p; }

  /// Child stream; distinct indices give unrelated keys.
  Stream substream(std::uint64_t index) const noexcept;

 private:
  explicit Stream(std::uint64_t key) noexcept : key_(key) {}
  std::uint64_t key_;
};

/// Sequential view over a Stream: hands out consecutive counters.
class Cursor {
 public:
  explicit Cursor(Stream stream, std::uint64_t start = 0) noexcept : stream_(stream), next_(start) {}

  double uniform() noexcept { return stream_.uniform(next_++); }
  double uniform(double lo, double hi) noexcept { return stream_.uniform(next_++, lo, hi); }
  double normal() noexcept { return stream_.normal(next_++); }
  bool bernoulli(double p) noexcept { return stream_.bernoulli(next_++, p); }
  std::uint64_t bits() noexcept { return stream_.bits(next_++); }
  std::uint64_t position() const noexcept { return next_; }

 private:
  Stream stream_;
  std::uint64_t next_;
};

/// Purpose labels used by the simulator.
namespace labels {
inline constexpr std::string_view kPopulation = "population";
inline constexpr std::string_view kInitialStates = "initial-states";
inline constexpr std::string_view kProcessNoise = "process-noise";
inline constexpr std::string_view kDesiredSignal = "desired-signal";
inline constexpr std::string_view kActuation = "actuation";
inline constexpr std::string_view kMapMonteCarlo = "map-monte-carlo";
}  // namespace labels

}  // namespace dlcpriv::rng
