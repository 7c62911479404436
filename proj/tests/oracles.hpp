// Test-side oracles, independent of the library's transform and
// decomposition code paths. The Walsh values here come straight from the
// sign-of-sine definition; the decomposition checker enumerates integers.
#ifndef WALSHLP_TESTS_ORACLES_HPP
#define WALSHLP_TESTS_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "walshlp/decomp.hpp"

namespace walshlp::oracle {

inline double rademacher_at(int k, double x) {
  const double s = std::sin(std::ldexp(1.0, k) * std::numbers::pi * x);
  return s > 0 ? 1.0 : (s < 0 ? -1.0 : 0.0);
}

/// w_n(x) as the product of r_{k+1}(x) over the set bits k of n; w_0 = 1.
inline double walsh_at(std::uint32_t n, double x) {
  double prod = 1.0;
  for (int k = 0; (n >> k) != 0; ++k)
    if ((n >> k) & 1u) prod *= rademacher_at(k + 1, x);
  return prod;
}

/// O(N^2) analysis transform from the definition, midpoint sampling.
inline std::vector<double> naive_paley_forward(
    const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<double> c(n, 0.0);
  for (std::uint32_t idx = 0; idx < n; ++idx) {
    double sum = 0.0;
    for (std::uint32_t j = 0; j < n; ++j)
      sum += values[j] * walsh_at(idx, (j + 0.5) / static_cast<double>(n));
    c[idx] = sum / static_cast<double>(n);
  }
  return c;
}

/// Exhaustive check of every BlockDecomposition1D invariant over [a, b).
/// Integer arithmetic throughout; returns an empty string on success.
inline std::string check_interval_decomposition(
    Interval1D iv, const BlockDecomposition1D& dec) {
  std::vector<int> cover(iv.b, 0);
  if (dec.singleton != iv.a) return "singleton != a";
  ++cover[dec.singleton];
  std::int64_t prev_kappa = -1;
  for (const Block1D& blk : dec.rising) {
    if (static_cast<std::int64_t>(blk.exponent) <= prev_kappa)
      return "kappa not strictly increasing";
    prev_kappa = blk.exponent;
    if (blk.block.b - blk.block.a != (1u << blk.exponent))
      return "rising block size != 2^kappa";
    for (std::uint32_t x = blk.block.a; x < blk.block.b; ++x) {
      if (x >= iv.b || x < iv.a) return "rising block outside interval";
      ++cover[x];
      const std::uint32_t shifted = iv.a ^ x;
      if (shifted < (1u << blk.exponent) || shifted >= (2u << blk.exponent))
        return "a xor rising block != dyadic block";
    }
  }
  std::int64_t prev_gamma = 64;
  for (const Block1D& blk : dec.falling) {
    if (static_cast<std::int64_t>(blk.exponent) >= prev_gamma)
      return "gamma not strictly decreasing";
    prev_gamma = blk.exponent;
    if (blk.block.b - blk.block.a != (1u << blk.exponent))
      return "falling block size != 2^gamma";
    for (std::uint32_t x = blk.block.a; x < blk.block.b; ++x) {
      if (x >= iv.b || x < iv.a) return "falling block outside interval";
      ++cover[x];
      const std::uint32_t shifted = iv.b ^ x;
      if (shifted < (1u << blk.exponent) || shifted >= (2u << blk.exponent))
        return "b xor falling block != dyadic block";
    }
  }
  for (std::uint32_t x = iv.a; x < iv.b; ++x)
    if (cover[x] != 1) return "not an exact cover at " + std::to_string(x);
  return "";
}

}  // namespace walshlp::oracle

#endif  // WALSHLP_TESTS_ORACLES_HPP
