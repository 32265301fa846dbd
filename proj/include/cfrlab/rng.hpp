#pragma once

#include <cstdint>
#include <random>

namespace cfrlab {

// mt19937_64 with hand-rolled output mappings so that draws are identical
// across standard library implementations (std::uniform_real_distribution
// is not portable).
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t raw() { return gen_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform in [0, n). Fixed-point multiply keeps the mapping deterministic;
  // the modulo bias for small n is below 2^-50.
  uint64_t uniform_int(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(gen_()) * n) >> 64);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace cfrlab
