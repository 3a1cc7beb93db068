#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "cosparse/types.hpp"

namespace cosparse {

// Seed derivation for independent streams: fold task coordinates into a base
// seed one at a time. splitmix64 is a bijective mixer, so distinct coordinate
// tuples give distinct streams.
inline uint64_t mix_seed(uint64_t s) {
  s += 0x9e3779b97f4a7c15ull;
  s = (s ^ (s >> 30)) * 0xbf58476d1ce4e5b9ull;
  s = (s ^ (s >> 27)) * 0x94d049bb133111ebull;
  return s ^ (s >> 31);
}

inline uint64_t derive_seed(uint64_t base) { return mix_seed(base); }

template <typename... Rest>
inline uint64_t derive_seed(uint64_t base, uint64_t head, Rest... rest) {
  return derive_seed(mix_seed(base ^ mix_seed(head)), rest...);
}

// Deterministic random source. Gaussian variates go through an explicit
// Box-Muller transform rather than std::normal_distribution, whose output
// sequence is implementation-defined; with mt19937_64 underneath, the same
// seed reproduces the same bytes on any platform.
class Rng {
public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t bits() { return engine_(); }

  // uniform in [0, 1)
  double uniform() { return std::ldexp(static_cast<double>(bits() >> 11), -53); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Index uniform_index(Index n) {
    // rejection-free modulo is biased for huge n; n here is far below 2^53
    return static_cast<Index>(static_cast<uint64_t>(uniform() * static_cast<double>(n)));
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  Vector normal_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  Matrix normal_matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = normal();
    return m;
  }

  // k distinct indices from {0, ..., n-1}, sorted (partial Fisher-Yates)
  std::vector<Index> sample_without_replacement(Index n, Index k) {
    require(k >= 0 && k <= n, "sample_without_replacement: need 0 <= k <= n");
    std::vector<Index> pool(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) pool[static_cast<size_t>(i)] = i;
    for (Index i = 0; i < k; ++i) {
      const Index j = i + uniform_index(n - i);
      std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
    }
    pool.resize(static_cast<size_t>(k));
    std::sort(pool.begin(), pool.end());
    return pool;
  }

private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cosparse
