#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace mrrsim {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Collapses (seed, a, b) into one generator seed. Used everywhere a worker or
// repetition needs its own stream, so results never depend on scheduling or
// on how many draws a sibling stream consumed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s ^= 0xA24BAED4963EE407ull * (a + 1);
  h ^= splitmix64(s);
  s ^= 0x9FB21C651E98DF25ull * (b + 1);
  h ^= splitmix64(s);
  return h;
}

// Deterministic stream of uniforms/gaussians. The gaussian uses an explicit
// Box-Muller transform (two draws per call) instead of std::normal_distribution,
// whose output is implementation defined.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) : gen_(mix_seed(seed, stream)) {}

  // [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal(double sigma) {
    const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t next() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace mrrsim
