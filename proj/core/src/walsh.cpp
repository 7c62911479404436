#include "walshlp/walsh.hpp"

#include <bit>
#include <cstddef>

namespace walshlp {

std::uint32_t bit_reverse(std::uint32_t j, int m) {
  std::uint32_t r = 0;
  for (int i = 0; i < m; ++i) r |= ((j >> i) & 1u) << (m - 1 - i);
  return r;
}

int rademacher_on_cell(int k, std::uint32_t j, Resolution m) {
  if (k == 0) throw std::domain_error("rademacher index k must be positive");
  if (k < 0 || k > m.m())
    throw ResolutionError("rademacher r_k not constant on 2^-m cells: k=" +
                          std::to_string(k) + ", m=" + std::to_string(m.m()));
  if (j >= m.cells()) throw std::out_of_range("cell index out of range");
  return ((j >> (m.m() - k)) & 1u) ? -1 : 1;
}

int walsh_on_cell(std::uint32_t n, std::uint32_t j, Resolution m) {
  if (n >= m.cells())
    throw SpectrumError("walsh index out of spectrum range: n=" +
                        std::to_string(n) + ", m=" + std::to_string(m.m()));
  if (j >= m.cells()) throw std::out_of_range("cell index out of range");
  return (std::popcount(n & bit_reverse(j, m.m())) & 1) ? -1 : 1;
}

namespace {

int log2_of_pow2(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0)
    throw ShapeError("length is not a power of two: " + std::to_string(n));
  return std::countr_zero(n);
}

// Natural (Hadamard) order butterfly: out[n] = sum_j (-1)^popcount(n&j) in[j].
void fwht_natural(std::vector<double>& v) {
  const std::size_t n = v.size();
  for (std::size_t len = 1; len < n; len <<= 1) {
    for (std::size_t i = 0; i < n; i += len << 1) {
      for (std::size_t j = i; j < i + len; ++j) {
        double x = v[j], y = v[j + len];
        v[j] = x + y;
        v[j + len] = x - y;
      }
    }
  }
}

void bit_reverse_permute(std::vector<double>& v, int m) {
  for (std::uint32_t i = 0; i < v.size(); ++i) {
    std::uint32_t r = bit_reverse(i, m);
    if (r > i) std::swap(v[i], v[r]);
  }
}

}  // namespace

std::vector<double> fwht_paley_forward(std::vector<double> values) {
  const int m = log2_of_pow2(values.size());
  fwht_natural(values);
  // W_paley[n][j] = (-1)^popcount(n & bitrev(j)) = H[bitrev(n)][j].
  bit_reverse_permute(values, m);
  const double scale = 1.0 / static_cast<double>(values.size());
  for (double& v : values) v *= scale;
  return values;
}

std::vector<double> fwht_paley_inverse(std::vector<double> coeffs) {
  const int m = log2_of_pow2(coeffs.size());
  bit_reverse_permute(coeffs, m);
  fwht_natural(coeffs);
  return coeffs;
}

namespace {

template <typename Transform1D>
void apply_separable(std::vector<double>& grid, std::uint32_t n,
                     Transform1D&& t) {
  std::vector<double> line(n);
  // rows (axis 2)
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) line[j] = grid[std::size_t{i} * n + j];
    line = t(std::move(line));
    for (std::uint32_t j = 0; j < n; ++j) grid[std::size_t{i} * n + j] = line[j];
  }
  // columns (axis 1)
  for (std::uint32_t j = 0; j < n; ++j) {
    for (std::uint32_t i = 0; i < n; ++i) line[i] = grid[std::size_t{i} * n + j];
    line = t(std::move(line));
    for (std::uint32_t i = 0; i < n; ++i) grid[std::size_t{i} * n + j] = line[i];
  }
}

}  // namespace

CoeffMatrix walsh_transform_2d(const GridFunction& f) {
  std::vector<double> g(f.values().begin(), f.values().end());
  apply_separable(g, f.cells(),
                  [](std::vector<double> v) { return fwht_paley_forward(std::move(v)); });
  return CoeffMatrix(f.resolution(), std::move(g));
}

GridFunction walsh_inverse_2d(const CoeffMatrix& c) {
  std::vector<double> g(c.coeffs().begin(), c.coeffs().end());
  apply_separable(g, c.cells(),
                  [](std::vector<double> v) { return fwht_paley_inverse(std::move(v)); });
  return GridFunction(c.resolution(), std::move(g));
}

GridFunction spectral_project(const GridFunction& f,
                              const std::function<bool(SpectralIndex)>& keep) {
  CoeffMatrix c = walsh_transform_2d(f);
  const std::uint32_t n = c.cells();
  for (std::uint32_t n1 = 0; n1 < n; ++n1)
    for (std::uint32_t n2 = 0; n2 < n; ++n2)
      if (!keep({n1, n2})) c.at(n1, n2) = 0.0;
  return walsh_inverse_2d(c);
}

GridFunction spectral_project(const GridFunction& f,
                              const std::vector<SpectralIndex>& index_set) {
  const std::uint32_t n = f.cells();
  CoeffMatrix c = walsh_transform_2d(f);
  CoeffMatrix kept(f.resolution());
  for (SpectralIndex idx : index_set) {
    if (idx.n1 >= n || idx.n2 >= n)
      throw SpectrumError("projection index out of spectrum range");
    kept.at(idx.n1, idx.n2) = c.at(idx.n1, idx.n2);
  }
  return walsh_inverse_2d(kept);
}

GridFunction modulate(const GridFunction& f, SpectralIndex n) {
  const Resolution res = f.resolution();
  const std::uint32_t cells = res.cells();
  const Resolution fine(res.m() + 1);
  if (n.n1 >= fine.cells() || n.n2 >= fine.cells())
    throw SpectrumError("modulation index exceeds 2^(m+1)");
  // Per-axis cell factor: average of the two subcell character values. For
  // indices below 2^m the character is constant on cells and the factor is +-1.
  auto axis_factors = [&](std::uint32_t ni) {
    std::vector<double> a(cells);
    for (std::uint32_t j = 0; j < cells; ++j)
      a[j] = 0.5 * (walsh_on_cell(ni, 2 * j, fine) +
                    walsh_on_cell(ni, 2 * j + 1, fine));
    return a;
  };
  const std::vector<double> a1 = axis_factors(n.n1);
  const std::vector<double> a2 = axis_factors(n.n2);
  GridFunction out(res);
  for (std::uint32_t j1 = 0; j1 < cells; ++j1)
    for (std::uint32_t j2 = 0; j2 < cells; ++j2)
      out.at(j1, j2) = f.at(j1, j2) * a1[j1] * a2[j2];
  return out;
}

}  // namespace walshlp
