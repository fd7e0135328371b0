#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace maxprob {

/// Deterministic 64-bit generator (splitmix64). The raw integer stream is
/// platform-independent; derived doubles are IEEE-exact, so repeated runs on
/// one platform reproduce identical bytes. Each parallel task must own its
/// Rng seeded through child_seed, never share one across threads.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1]; safe as a log() argument.
  double next_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; the spare deviate is cached.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = next_open();
    double u2 = next_double();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 6.28318530717958647692 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Unbiased integer in [0, n); rejection sampling.
  uint64_t next_below(uint64_t n) {
    if (n <= 1) return 0;
    uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  int next_index(int n) { return static_cast<int>(next_below(static_cast<uint64_t>(n))); }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = next_below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Stream-splitting rule: child stream k of a base seed is the first output
/// of splitmix64 seeded at base xor (k+1)*odd-constant. Children of distinct
/// indices are independent streams for all practical purposes.
inline uint64_t child_seed(uint64_t base, uint64_t index) {
  Rng mixer(base ^ (0xD1B54A32D192ED03ull * (index + 1)));
  return mixer.next_u64();
}

}  // namespace maxprob
