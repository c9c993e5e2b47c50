#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace geometria {

// All randomness in the library flows through std::mt19937_64, whose output
// sequence is fixed by the standard, plus the explicit transforms below.
// The std::*_distribution adaptors are implementation-defined and are never
// used, so a seed reproduces the same draws on any conforming platform.
using Rng = std::mt19937_64;

// Uniform double in [0, 1), 53 random bits.
inline double u01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased uniform integer in [0, n). Rejection on the low band.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % n;
  }
}

// Standard normal via Box-Muller. Consumes two draws per call.
inline double standard_normal(Rng& rng) {
  double u = u01(rng);
  while (u <= 0.0) u = u01(rng);
  const double v = u01(rng);
  const double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u)) * std::cos(two_pi * v);
}

// Gamma(shape, 1) via Marsaglia-Tsang squeeze, boosted for shape < 1.
inline double gamma_draw(Rng& rng, double shape) {
  if (shape < 1.0) {
    const double boost = std::pow(u01(rng) + 1e-300, 1.0 / shape);
    return gamma_draw(rng, shape + 1.0) * boost;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = standard_normal(rng);
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = u01(rng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u + 1e-300) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return d * v;
  }
}

// Symmetric Dirichlet(concentration) over `dim` coordinates.
inline std::vector<double> dirichlet_draw(Rng& rng, double concentration,
                                          std::size_t dim) {
  std::vector<double> x(dim);
  double sum = 0.0;
  for (auto& xi : x) {
    xi = gamma_draw(rng, concentration);
    sum += xi;
  }
  if (sum <= 0.0) {
    // Underflow at extreme concentrations: fall back to a uniform point mass.
    const std::size_t hot = static_cast<std::size_t>(uniform_below(rng, dim));
    for (auto& xi : x) xi = 0.0;
    x[hot] = 1.0;
    return x;
  }
  for (auto& xi : x) xi /= sum;
  return x;
}

// Index drawn proportionally to nonnegative weights summing to `total`.
inline std::size_t categorical_from_cumulative(Rng& rng,
                                               const double* weights,
                                               std::size_t n, double total) {
  const double u = u01(rng) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return n - 1;
}

}  // namespace geometria
