#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace recourse::detail {

// Portable draws on top of mt19937_64; the std distributions are
// implementation-defined, so golden instances avoid them.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

  bool bernoulli(double p) { return uniform() < p; }

  // Dirichlet(1, ..., 1) via normalised exponentials.
  std::vector<double> dirichlet(std::size_t n) {
    std::vector<double> v(n);
    double sum = 0.0;
    for (double& x : v) {
      x = -std::log(1.0 - uniform());
      sum += x;
    }
    for (double& x : v) x /= sum;
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace recourse::detail
