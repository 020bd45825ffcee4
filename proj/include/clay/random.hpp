#pragma once

#include <cstdint>

namespace clay {

// Counter-based generator: every draw is a pure function of (seed, counter,
// stream), so any loop over counters gives the same numbers regardless of
// iteration order or thread count.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed) : seed_(seed) {}

  constexpr std::uint64_t bits(std::uint64_t counter, std::uint64_t stream = 0) const {
    std::uint64_t z = mix(seed_ ^ mix(counter + 0x9e3779b97f4a7c15ULL * (stream + 1)));
    return mix(z + counter);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t counter, std::uint64_t stream = 0) const {
    return static_cast<double>(bits(counter, stream) >> 11) * 0x1.0p-53;
  }

 private:
  // splitmix64 finalizer
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
};

}  // namespace clay
