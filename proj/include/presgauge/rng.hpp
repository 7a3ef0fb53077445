#pragma once

#include <cstdint>
#include <string_view>

namespace presgauge {

// Seeded generator with a fixed, platform-independent bit stream
// (splitmix64). std:: distributions are implementation-defined, which
// would break byte-reproducible outputs, so all draws go through the
// helpers below.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Derives an independent stream for a named sub-task, so adding a draw
  // in one place does not shift every later draw of the same seed.
  Rng(std::uint64_t seed, std::string_view stream) : state_(seed) {
    for (char c : stream) {
      state_ = next_u64() ^ (static_cast<std::uint64_t>(static_cast<unsigned char>(c)) * 0x9e3779b97f4a7c15ULL);
    }
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
  }

  // Uniform in [0, n). n must be > 0.
  std::uint64_t uniform_int(std::uint64_t n) {
    return next_u64() % n;
  }

  bool chance(double p) {
    return uniform() < p;
  }

 private:
  std::uint64_t state_;
};

}  // namespace presgauge
