#ifndef WALSHLP_WALSH_HPP
#define WALSHLP_WALSH_HPP

#include <functional>
#include <vector>

#include "walshlp/types.hpp"

namespace walshlp {

/// Reverse the low `m` bits of `j`.
std::uint32_t bit_reverse(std::uint32_t j, int m);

/// Value of the Rademacher function r_k on dyadic cell j of a 2^m grid,
/// taken at the cell midpoint. Requires 1 <= k <= m (r_k is not constant on
/// the cells otherwise).
int rademacher_on_cell(int k, std::uint32_t j, Resolution m);

/// Value of the Paley-ordered Walsh function w_n on cell j. w_0 is the
/// constant +1. Closed form: (-1)^popcount(n & bitreverse_m(j)).
int walsh_on_cell(std::uint32_t n, std::uint32_t j, Resolution m);

/// Analysis transform: c_n = 2^-m sum_j values[j] * w_n(cell j), computed as
/// an in-place butterfly followed by a bit-reversal permutation.
std::vector<double> fwht_paley_forward(std::vector<double> values);

/// Synthesis: f_j = sum_n coeffs[n] * w_n(cell j). Exact inverse of forward.
std::vector<double> fwht_paley_inverse(std::vector<double> coeffs);

/// Separable 2D analysis / synthesis.
CoeffMatrix walsh_transform_2d(const GridFunction& f);
GridFunction walsh_inverse_2d(const CoeffMatrix& c);

/// Spectral projection M_I: keep coefficients where keep(n) is true.
GridFunction spectral_project(const GridFunction& f,
                              const std::function<bool(SpectralIndex)>& keep);

/// Projection onto an explicit index set; indices must lie in [0, 2^m)^2.
GridFunction spectral_project(const GridFunction& f,
                              const std::vector<SpectralIndex>& index_set);

/// Pointwise product f * w_n for n in [0, 2^{m+1})^2. Characters are
/// evaluated on the half-resolution subgrid and averaged back per cell; for
/// n in [0, 2^m)^2 this is plain pointwise multiplication.
GridFunction modulate(const GridFunction& f, SpectralIndex n);

}  // namespace walshlp

#endif  // WALSHLP_WALSH_HPP
