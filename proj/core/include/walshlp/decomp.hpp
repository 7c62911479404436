#ifndef WALSHLP_DECOMP_HPP
#define WALSHLP_DECOMP_HPP

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "walshlp/types.hpp"

namespace walshlp {

/// Half-open integer interval [a, b). The closed form [a, b-1] is the
/// external (CLI/JSON) convention; conversion happens at that boundary only.
struct Interval1D {
  std::uint32_t a = 0;
  std::uint32_t b = 0;

  std::uint32_t size() const { return b - a; }
  bool contains(std::uint32_t x) const { return a <= x && x < b; }
  friend bool operator==(const Interval1D&, const Interval1D&) = default;
};

inline Interval1D make_interval(std::uint32_t a, std::uint32_t b) {
  if (a >= b) throw std::invalid_argument("invalid interval: a >= b");
  return {a, b};
}

/// Dyadic spectral block: {0} for k = 0, [2^(k-1), 2^k - 1] for k > 0.
Interval1D delta_block_1d(std::uint32_t k);

struct DeltaBlock2D {
  Interval1D i1, i2;
};
DeltaBlock2D delta_block_2d(SpectralIndex k);

/// One xor-shiftable fragment of a 1D interval: |block| = 2^exponent and
/// (endpoint xor block) = [2^exponent, 2^(exponent+1) - 1] elementwise.
struct Block1D {
  std::uint32_t exponent = 0;  // kappa_j for rising, gamma_j for falling
  Interval1D block;
  friend bool operator==(const Block1D&, const Block1D&) = default;
};

/// {a} plus rising blocks (shifted by a, exponents strictly increasing) and
/// falling blocks (shifted by b, exponents strictly decreasing).
struct BlockDecomposition1D {
  std::uint32_t singleton = 0;
  std::vector<Block1D> rising;
  std::vector<Block1D> falling;
};

BlockDecomposition1D decompose_interval(Interval1D iv);

struct SpectralRectangle {
  Interval1D i1, i2;

  bool contains(SpectralIndex n) const {
    return i1.contains(n.n1) && i2.contains(n.n2);
  }
  std::uint64_t area() const {
    return std::uint64_t{i1.size()} * i2.size();
  }
  friend bool operator==(const SpectralRectangle&,
                         const SpectralRectangle&) = default;
};

enum class BlockClass { A, B, C, D };
std::string to_string(BlockClass cls);

/// Product fragment of a spectral rectangle together with the vertex whose
/// xor shift maps it onto the dyadic block delta_{diff_index}.
struct MappedBlock {
  Interval1D b1, b2;
  BlockClass cls = BlockClass::A;
  SpectralIndex vertex;
  SpectralIndex diff_index;

  bool contains(SpectralIndex n) const {
    return b1.contains(n.n1) && b2.contains(n.n2);
  }
};

struct RectangleDecomposition {
  SpectralRectangle rect;
  std::vector<MappedBlock> blocks;
};

RectangleDecomposition decompose_rectangle(const SpectralRectangle& rect);

struct VerificationResult {
  bool ok = true;
  std::vector<std::string> issues;
};

/// Brute-force oracle: disjointness, exact cover of rect, and the elementwise
/// vertex-xor-block = delta_k identity for every block. Integer arithmetic.
VerificationResult verify_decomposition(const SpectralRectangle& rect,
                                        const RectangleDecomposition& dec);

nlohmann::json to_json(const RectangleDecomposition& dec);

}  // namespace walshlp

#endif  // WALSHLP_DECOMP_HPP
