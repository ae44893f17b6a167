#pragma once

#include <cstdint>

namespace numphase {

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stateless counter-based generator: every draw is a pure function of
/// (seed, stream, index). Shots can be evaluated in any order or partition
/// and still reproduce the sequential run bit for bit.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed) noexcept : key_(splitmix64(seed)) {}

  constexpr std::uint64_t bits(std::uint64_t stream, std::uint64_t index) const noexcept {
    const std::uint64_t k = splitmix64(key_ ^ (stream * 0xd1b54a32d192ed03ULL));
    return splitmix64(k + index * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t stream, std::uint64_t index) const noexcept {
    return static_cast<double>(bits(stream, index) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
};

}  // namespace numphase
