#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace dqnn {

using Cx = std::complex<double>;

// splitmix64 mixer — used to derive statistically independent substreams
// (per channel, per sample, per worker) from one master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Chain up to three indices into a fresh seed. Order-sensitive.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = splitmix64(seed ^ 0x6a09e667f3bcc908ULL);
  s = splitmix64(s ^ a);
  s = splitmix64(s ^ b);
  s = splitmix64(s ^ c);
  return s;
}

// Deterministic RNG. Gaussian variates use explicit Box-Muller (two uniforms
// per normal, cosine branch only, no cached spare) instead of
// std::normal_distribution, whose byte stream is not pinned by the standard.
// Identical seeds therefore reproduce identical sample sequences on any
// conforming libstdc++/libc++.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform on [0, 1): top 53 bits of the generator output
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]: keeps log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

  // standard complex Gaussian, E|z|^2 = 1
  Cx normal_complex() {
    const double re = normal();
    const double im = normal();
    return Cx(re, im) / std::sqrt(2.0);
  }

  Eigen::MatrixXcd ginibre(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXcd g(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = normal_complex();
    return g;
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace dqnn
