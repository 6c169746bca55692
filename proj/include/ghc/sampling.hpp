#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "ghc/error.hpp"

namespace ghc {

namespace detail {

inline constexpr std::array<std::uint32_t, 16> kPrimes = {
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

inline double radical_inverse(std::uint64_t index, std::uint32_t base) noexcept {
  const double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (index) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Uniform doubles in [0,1) from a 64-bit Mersenne twister; the mapping from
/// raw bits is fixed so streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() noexcept { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  std::uint64_t bits() noexcept { return eng_(); }
  std::size_t index(std::size_t n) noexcept {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

  double normal() noexcept {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform direction on the unit sphere in R^n.
  void direction(std::span<double> out) noexcept {
    double s = 0.0;
    do {
      s = 0.0;
      for (auto& v : out) {
        v = normal();
        s += v * v;
      }
    } while (s == 0.0);
    s = std::sqrt(s);
    for (auto& v : out) v /= s;
  }

 private:
  std::mt19937_64 eng_;
};

/**
 * Point sets inside Euclidean balls B(center, radius).
 *
 * Each call mixes three groups: half a Halton sequence mapped to the ball,
 * a quarter uniform pseudorandom points, and a quarter pseudorandom points
 * with log-uniform radius in [1e-6 r, r) so the neighbourhood of the centre
 * is probed at every scale.
 */
class BallSampler {
 public:
  BallSampler(std::size_t dims, std::uint64_t seed) : dims_(dims), seed_(seed) {
    if (dims == 0 || dims > detail::kPrimes.size()) {
      throw error(errc::invalid_argument, "ball sampling supports 1 to 16 dimensions");
    }
  }

  /// Appends `count` points (flattened, dims() values each) for the given
  /// level; the stream depends only on (seed, level, count).
  void generate(std::span<const double> center, double radius, std::size_t count,
                std::uint64_t level, std::vector<double>& out) const {
    const std::size_t n = dims_;
    Rng rng(detail::splitmix64(seed_ ^ detail::splitmix64(level + 1)));
    std::vector<double> p(n);

    const std::size_t n_halton = count / 2;
    const std::size_t n_uniform = count / 4;
    const std::size_t n_log = count - n_halton - n_uniform;

    // Halton points in [-1,1]^n, rejected outside the unit ball.
    std::uint64_t index = 1 + (rng.bits() % 1000003);
    std::size_t made = 0;
    const std::size_t max_tries = 64 * (n_halton + 1);
    for (std::size_t tries = 0; made < n_halton && tries < max_tries; ++tries, ++index) {
      double r2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        p[i] = 2.0 * detail::radical_inverse(index, detail::kPrimes[i]) - 1.0;
        r2 += p[i] * p[i];
      }
      if (r2 >= 1.0) continue;
      for (std::size_t i = 0; i < n; ++i) out.push_back(center[i] + radius * p[i]);
      ++made;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n_uniform + (n_halton - made); ++k) {
      rng.direction(p);
      const double r = radius * std::pow(rng.uniform(), inv_n);
      for (std::size_t i = 0; i < n; ++i) out.push_back(center[i] + r * p[i]);
    }
    for (std::size_t k = 0; k < n_log; ++k) {
      rng.direction(p);
      const double r = radius * std::pow(10.0, -6.0 * rng.uniform());
      for (std::size_t i = 0; i < n; ++i) out.push_back(center[i] + r * p[i]);
    }
  }

  std::size_t dims() const noexcept { return dims_; }

 private:
  std::size_t dims_;
  std::uint64_t seed_;
};

}  // namespace ghc
