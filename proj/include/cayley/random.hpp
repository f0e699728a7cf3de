#pragma once

// Seeded streams for Monte-Carlo work. Every sample index gets its own child
// stream, so results do not depend on how samples are scheduled:
//   child_seed(seed, i) = splitmix64(seed + (i + 1) * 0x9E3779B97F4A7C15)
//   engine              = std::mt19937_64(child_seed)
// Uniforms take the top 53 bits of each 64-bit draw, so the stream is
// identical on every platform.

#include <cstdint>
#include <random>

namespace cayley {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  static RandomStream child(std::uint64_t seed, std::uint64_t index) {
    return RandomStream(splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15ULL));
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cayley
