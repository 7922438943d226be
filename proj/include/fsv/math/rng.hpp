#pragma once

#include <cstdint>

#include "fsv/math/normal.hpp"

namespace fsv::math {

// splitmix64 step: advances the state and returns a mixed output.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives a well-dispersed substream key from a master seed and up to three
// block coordinates (e.g. sweep index, block kind, block index). Streams with
// distinct coordinates are statistically independent, which is what makes
// sequential and parallel sweep scheduling bit-identical.
inline std::uint64_t derive_key(std::uint64_t master, std::uint64_t a,
                                std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = master;
  std::uint64_t k = splitmix64(s);
  s = k ^ (a * 0xd1342543de82ef95ULL);
  k = splitmix64(s);
  s = k ^ (b * 0xaf251af3b0f025b5ULL);
  k = splitmix64(s);
  s = k ^ (c * 0x9e3779b97f4a7c15ULL);
  return splitmix64(s);
}

// xoshiro256++ with inverse-CDF normal draws. Self-contained so that streams
// are reproducible independently of the standard library implementation.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : s_) w = splitmix64(s);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on the open interval (0,1): never returns 0 or 1.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() { return normal_quantile(uniform01()); }

  double normal(double mean, double sd) { return mean + sd * normal(); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

}  // namespace fsv::math
