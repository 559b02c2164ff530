#pragma once

#include <cstdint>

namespace alqhd {

/// SplitMix64 finalizer. Good avalanche, trivially counter-mode capable.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Counter-based uniform generator. A (seed, stream) pair names an
/// independent sequence, so work item i can draw from stream i without
/// consuming anyone else's numbers; results are reproducible across
/// platforms because only integer arithmetic is involved.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : base_(splitmix64(splitmix64(seed) ^ (stream + 0x632be59bd9b4e019ull))) {}

  std::uint64_t next_u64() noexcept {
    return splitmix64(base_ + (++counter_) * 0x9e3779b97f4a7c15ull);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * next_unit();
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept { return next_u64() % n; }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace alqhd
