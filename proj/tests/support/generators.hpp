#pragma once

// Seeded generators for property tests: every case is reproducible from the
// seed printed on failure.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kernlat/korobov_space.hpp"
#include "kernlat/lattice.hpp"

namespace testsupport {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(integer(0, static_cast<long>(v.size()) - 1))];
  }

  long unit(long n) { return pick(kernlat::units(n)); }

  kernlat::GeneratingVector vector(long n, int d) {
    std::vector<long> z;
    for (int j = 0; j < d; ++j) z.push_back(unit(n));
    return {n, z};
  }

  kernlat::ProductWeights weights() {
    switch (integer(0, 4)) {
      case 0: return kernlat::ProductWeights::poly3alpha();
      case 1: return kernlat::ProductWeights::poly2();
      case 2: return kernlat::ProductWeights::geometric09();
      case 3: return kernlat::ProductWeights::equal();
      default: {
        std::vector<double> g;
        for (int j = 0; j < 12; ++j) g.push_back(uniform(0.005, 0.2));
        return kernlat::ProductWeights::explicit_list(g);
      }
    }
  }

  std::vector<double> point(int d) {
    std::vector<double> y(static_cast<std::size_t>(d));
    for (auto& v : y) v = uniform();
    return y;
  }

  std::vector<double> values(std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline const std::vector<kernlat::ProductWeights>& named_schemes() {
  static const std::vector<kernlat::ProductWeights> all{
      kernlat::ProductWeights::poly3alpha(), kernlat::ProductWeights::poly2(),
      kernlat::ProductWeights::geometric09(), kernlat::ProductWeights::equal()};
  return all;
}

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace testsupport
