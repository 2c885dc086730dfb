#ifndef SKETCHKD_RNG_HPP_
#define SKETCHKD_RNG_HPP_

#include <random>
#include <string>

#include "sketchkd/common.hpp"

namespace sketchkd {

using Rng = std::mt19937_64;

// One root seed per run; every component draws from its own named stream so
// that adding a consumer never shifts another component's randomness.
class RngPool {
 public:
  explicit RngPool(std::uint64_t root_seed) : root_(root_seed) {}

  Rng stream(const std::string& name) const {
    return Rng(fnv1a64(name, root_ ^ 0x9e3779b97f4a7c15ull));
  }

  std::uint64_t root() const { return root_; }

 private:
  std::uint64_t root_;
};

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi_inclusive) {
  return std::uniform_int_distribution<int>(lo, hi_inclusive)(rng);
}

inline double gaussian(Rng& rng, double mean = 0.0, double stddev = 1.0) {
  return std::normal_distribution<double>(mean, stddev)(rng);
}

// Truncated normal used for parameter init: resample outside two sigma.
inline double trunc_normal(Rng& rng, double stddev) {
  for (;;) {
    double x = gaussian(rng, 0.0, stddev);
    if (std::abs(x) <= 2.0 * stddev) return x;
  }
}

}  // namespace sketchkd

#endif  // SKETCHKD_RNG_HPP_
