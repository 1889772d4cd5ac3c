#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace latentscope {

// Fixed, documented pseudo-random generator so that synthetic fixtures are
// byte-stable across platforms and reproducible from other languages.
//
// State setup: four splitmix64 outputs from the user seed.
// Stream: xoshiro256++ (Blackman & Vigna), uniform doubles take the top
// 53 bits, Gaussians come from the Box-Muller transform (no ziggurat, no
// rejection step, so the draw count per sample is fixed).

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class Xoshiro256PlusPlus {
public:
  explicit Xoshiro256PlusPlus(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4]{};
};

struct GaussianPair {
  double z0;
  double z1;
};

// Box-Muller from two uniforms in [0, 1). 1-u1 keeps the log argument in
// (0, 1] so the transform never sees log(0).
inline GaussianPair box_muller(double u1, double u2) {
  const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace latentscope
