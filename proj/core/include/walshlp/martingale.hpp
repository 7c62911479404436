#ifndef WALSHLP_MARTINGALE_HPP
#define WALSHLP_MARTINGALE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "walshlp/types.hpp"

namespace walshlp {

/// Dyadic rectangle [k1 2^-n1, (k1+1) 2^-n1) x [k2 2^-n2, (k2+1) 2^-n2).
struct DyadicSpatialRect {
  int n1 = 0, n2 = 0;          // scale exponents
  std::uint32_t k1 = 0, k2 = 0;  // position indices

  double measure() const { return std::ldexp(1.0, -(n1 + n2)); }
};

DyadicSpatialRect make_dyadic_rect(int n1, int n2, std::uint32_t k1,
                                   std::uint32_t k2);

/// Conditional expectation E_{n1,n2}: average over dyadic rectangles of size
/// 2^-n1 x 2^-n2. Requires n1, n2 <= m.
GridFunction cond_expect(const GridFunction& f, SpectralIndex n);

/// Same operator via spectral projection onto [0, 2^n1) x [0, 2^n2).
GridFunction cond_expect_spectral(const GridFunction& f, SpectralIndex n);

/// Martingale difference: four-term second-order difference of conditional
/// expectations, with out-of-range terms zero.
GridFunction mart_diff(const GridFunction& f, SpectralIndex k);

/// Same operator via spectral projection onto delta_k.
GridFunction mart_diff_spectral(const GridFunction& f, SpectralIndex k);

/// Littlewood-Paley square function: pointwise l2 over all differences
/// with indices in [0, m]^2.
GridFunction square_function(const GridFunction& f);

/// Cell-average L^p (quasi-)norm: (2^-2m sum |v|^p)^(1/p), p > 0.
double lp_norm(const GridFunction& f, double p);

/// ||S(f)||_{L^p}.
double hardy_norm(const GridFunction& f, double p);

/// Pointwise Euclidean norm across a family of equal-resolution functions.
/// An empty family needs an explicit resolution and yields the zero function.
GridFunction pointwise_l2(const std::vector<GridFunction>& family,
                          std::optional<Resolution> res = std::nullopt);

struct RectangleAtomSpec {
  DyadicSpatialRect support;
  double p = 1.0;
  GridFunction values;
  bool degenerate = false;  // support too thin for nonzero line-zero values
};

/// Random rectangle atom on F: random values on F with all line integrals
/// zero (row then column mean subtraction; exact after the two passes) and
/// ||a||_2 = |F|^(1/2 - 1/p). Deterministic given seed.
RectangleAtomSpec make_rectangle_atom(DyadicSpatialRect F, double p,
                                      std::uint64_t seed, Resolution m);

/// Checks support, the L^2 size bound, and vanishing line integrals.
bool is_rectangle_atom(const GridFunction& f, DyadicSpatialRect F, double p,
                       double tol);

}  // namespace walshlp

#endif  // WALSHLP_MARTINGALE_HPP
