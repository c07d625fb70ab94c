#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace seedtree {

/// splitmix64 finalizer; used for seed derivation and digest mixing.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Derives independent sub-seeds from one experiment seed, so e.g. trace
/// generation and item picks never share a stream.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
  return mix64(base ^ mix64(tag));
}

/// Deterministic pseudo-random stream. mt19937_64 output is pinned by the
/// standard; bounded draws use rejection sampling instead of
/// uniform_int_distribution, whose mapping is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Unbiased draw from [0, n). n must be nonzero.
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t reject_below = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= reject_below) return r % n;
    }
  }

  /// Uniform double in [0, 1) with 53 significant bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& values) {
    // Fisher-Yates; std::shuffle is implementation-defined.
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[bounded(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace seedtree
