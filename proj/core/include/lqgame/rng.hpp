#pragma once

#include <cmath>
#include <cstdint>

namespace lqgame {

/** splitmix64 finalizer; bijective on 64-bit words. */
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/** Key for an independent substream, e.g. one Monte Carlo replicate. */
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed + 0x9E3779B97F4A7C15ull * (stream + 1));
}

/**
 * Counter-based generator: draw n is a hash of (key, n), so a stream's
 * output depends only on its key and how many values were taken, never on
 * which thread runs it.
 *
 * The Gaussian transform is pinned so seeds stay meaningful across
 * implementations: each normal consumes exactly two uniforms u1, u2 and
 * returns sqrt(-2 ln(1 - u1)) * cos(2 pi u2), with uniforms taken as the top
 * 53 bits of the hash scaled into [0, 1).
 */
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() {
    return mix64(key_ + 0x9E3779B97F4A7C15ull * ++counter_);
  }

  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_normal() {
    double u1 = 1.0 - next_uniform();  // in (0, 1], keeps the log finite
    double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace lqgame
