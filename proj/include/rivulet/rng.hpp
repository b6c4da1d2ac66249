#pragma once

#include <cstdint>

namespace rivulet {

// splitmix64: 64-bit state, cheap, good enough statistically for sampling and
// coin flips here.  fork() derives decorrelated sub-streams from (state, salt)
// so one tracker seed fans out into independent per-collection streams without
// the streams sharing draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0,1), 53-bit mantissa
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // unbiased uniform integer in [0,n), Lemire's method
  std::uint64_t below(std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t t = (0 - n) % n;
      while (lo < t) {
        m = static_cast<unsigned __int128>(next()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  Rng fork(std::uint64_t salt) const {
    std::uint64_t z = s_ ^ (0xD1B54A32D192ED03ull * (salt + 1));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return Rng(z ^ (z >> 31));
  }

  std::uint64_t state() const { return s_; }

 private:
  std::uint64_t s_;
};

}  // namespace rivulet
