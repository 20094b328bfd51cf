#pragma once

#include <cstdint>
#include <random>

namespace selcond {

/// SplitMix64 finalizer. Used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of stream `index` under `master`: mix64(mix64(master) ^ index).
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::uint64_t index) noexcept {
  return mix64(mix64(master) ^ index);
}

/// Deterministic random stream: std::mt19937_64 (whose output sequence the
/// C++ standard fixes) seeded with the 64-bit seed. Doubles are built from
/// the top 53 bits, so streams are bit-identical across platforms; the
/// standard library distributions are never used.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Independent child stream.
  RandomSource split(std::uint64_t index) const {
    return RandomSource(derive_seed(seed_, index));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace selcond
