#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "mirrorvis/types.hpp"

namespace mirrorvis::rng {

// splitmix64 output stage. Scrambles correlated inputs into seeds that are
// safe to hand to independent engines.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// Engine for trajectory k under a master seed. The derivation is part of
// the output contract (reruns must agree byte for byte), so it is frozen:
//   mt19937_64(mix64(seed + (k + 1) * 0x9E3779B97F4A7C15)).
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t trajectory_index) {
  return std::mt19937_64(
      mix64(seed + (trajectory_index + 1) * 0x9E3779B97F4A7C15ULL));
}

// Standard normal draws via Box-Muller on 53-bit uniforms, pair-cached.
// log(1 - u) keeps the argument strictly positive.
class NormalSampler {
 public:
  explicit NormalSampler(std::mt19937_64 engine) : engine_(std::move(engine)) {}

  Real operator()() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const Real u1 = uniform53();
    const Real u2 = uniform53();
    const Real r = std::sqrt(-2.0 * std::log(1.0 - u1));
    const Real angle = two_pi * u2;
    cached_ = r * std::sin(angle);
    has_cached_ = true;
    return r * std::cos(angle);
  }

 private:
  Real uniform53() {
    return static_cast<Real>(engine_() >> 11) * 0x1.0p-53;
  }

  std::mt19937_64 engine_;
  Real cached_ = 0;
  bool has_cached_ = false;
};

}  // namespace mirrorvis::rng
