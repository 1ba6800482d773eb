#pragma once

#include <cstdint>
#include <random>

namespace propphase {

/// Seeded random stream used by all samplers.
///
/// Replication streams are derived with a fixed splitmix64-based rule,
/// child(seed, i) = RandomStream(mix(seed, i)), so scenario output is a
/// pure function of the master seed regardless of worker count.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

  /// splitmix64 finalizer over (a + golden-ratio * (b+1)).
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static RandomStream child(std::uint64_t master_seed, std::uint64_t index) {
    return RandomStream(mix(master_seed, index));
  }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on the open interval (0,1); safe to pass through log().
  double uniform01() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Standard normal via Box-Muller; the paired deviate is cached.
  double normal();

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace propphase
