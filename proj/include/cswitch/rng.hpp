#pragma once

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

namespace cswitch {

// Deterministic, platform-independent generator (splitmix64). Standard
// library distributions are implementation-defined, so all sampling
// used for corpus synthesis goes through this class to keep outputs
// byte-identical for a given seed.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Unbiased integer in [0, n). n must be > 0.
  uint64_t below(uint64_t n) {
    // Lemire's multiply-and-reject method.
    uint64_t x = next();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    uint64_t l = static_cast<uint64_t>(m);
    if (l < n) {
      uint64_t t = (0 - n) % n;
      while (l < t) {
        x = next();
        m = static_cast<unsigned __int128>(x) * n;
        l = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      using std::swap;
      swap(v[i - 1], v[j]);
    }
  }

  // Index sampled proportionally to the (positive) weights.
  size_t pick_weighted(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double r = uniform() * total;
    double cum = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
      cum += weights[i];
      if (r < cum) return i;
    }
    return weights.size() - 1;
  }

 private:
  uint64_t state_;
};

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stage seeds are derived from the single run seed by stable hashing of
// the stage name, so every pipeline stage is reproducible in isolation.
inline uint64_t derive_seed(uint64_t base, std::string_view label) {
  return mix64(base ^ fnv1a64(label));
}

// Per-item seed for parallel-safe, order-independent noising.
inline uint64_t derive_seed(uint64_t base, uint64_t index) {
  return mix64(base + 0x9E3779B97F4A7C15ull * (index + 1));
}

}  // namespace cswitch
