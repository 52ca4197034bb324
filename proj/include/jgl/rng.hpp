#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace jgl {

// Seedable generator with a fixed, documented algorithm so outputs do not
// depend on the standard library's distribution implementations:
//   engine   std::mt19937_64 (fully specified by the standard)
//   index    unbiased rejection sampling on the raw 64-bit output
//   uniform  top 53 bits scaled by 2^-53, in [0, 1)
//   normal   Marsaglia polar method, second variate cached
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform in [0, n). n must be positive.
  std::uint64_t index(std::uint64_t n);
  // Uniform in [lo, hi], inclusive.
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {
    return lo + index(hi - lo + 1);
  }
  double uniform();
  double normal();
  bool coin(double p_true) { return uniform() < p_true; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(index(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace jgl
