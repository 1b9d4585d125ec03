#pragma once

#include <cmath>
#include <cstdint>

namespace confdom {

// splitmix64 step: advances the state and returns a mixed 64-bit word.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from a base seed and a stream index.
// Used by the coverage driver: trial j draws from derive_stream(seed, j),
// so totals do not depend on how trials are partitioned across threads.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed ^ ((index + 1) * 0xD1B54A32D192ED03ULL);
  return splitmix64(s);
}

// Seedable normal-variate generator: splitmix64 uniforms fed through the
// Box-Muller pair transform. Not thread-safe; use one instance per stream.
class NormalRng {
 public:
  explicit NormalRng(std::uint64_t seed) : state_(seed) {}

  // Uniform on [0,1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53;
  }

  // Standard normal deviate.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform01();  // (0,1], keeps the log finite
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
  }

  double normal(double mu, double sigma) { return mu + sigma * normal(); }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace confdom
