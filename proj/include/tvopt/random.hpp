#pragma once

#include <cstdint>
#include <random>

namespace tvopt {

// Draws from std::mt19937_64 with hand-written uniform/normal transforms, so a
// given seed yields the same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller, both outputs used).
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Per-purpose stream labels; a derived seed is `root ^ label`.
enum class Stream : std::uint64_t {
  kGraph = 0x67726170685f5f31ULL,
  kData = 0x646174615f5f5f32ULL,
  kInit = 0x696e69745f5f5f33ULL,
};

inline std::uint64_t derive_seed(std::uint64_t root, Stream label, std::uint64_t index = 0) {
  // splitmix64 finaliser keeps neighbouring indices decorrelated.
  std::uint64_t z = root ^ static_cast<std::uint64_t>(label);
  z += 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace tvopt
