#include "walshlp/martingale.hpp"

#include <cmath>
#include <random>

#include "walshlp/decomp.hpp"
#include "walshlp/walsh.hpp"

namespace walshlp {

DyadicSpatialRect make_dyadic_rect(int n1, int n2, std::uint32_t k1,
                                   std::uint32_t k2) {
  if (n1 < 0 || n2 < 0) throw std::invalid_argument("negative dyadic scale");
  if (k1 >= (std::uint32_t{1} << n1) || k2 >= (std::uint32_t{1} << n2))
    throw std::out_of_range("dyadic rectangle position out of range");
  return {n1, n2, k1, k2};
}

namespace {

void check_scale(const GridFunction& f, SpectralIndex n) {
  if (n.n1 > static_cast<std::uint32_t>(f.resolution().m()) ||
      n.n2 > static_cast<std::uint32_t>(f.resolution().m()))
    throw ResolutionError("conditional expectation scale exceeds resolution");
}

}  // namespace

GridFunction cond_expect(const GridFunction& f, SpectralIndex n) {
  check_scale(f, n);
  const int m = f.resolution().m();
  const std::uint32_t cells = f.cells();
  const std::uint32_t h1 = std::uint32_t{1} << (m - n.n1);  // block height
  const std::uint32_t h2 = std::uint32_t{1} << (m - n.n2);  // block width
  GridFunction out(f.resolution());
  const double inv = 1.0 / (static_cast<double>(h1) * h2);
  for (std::uint32_t b1 = 0; b1 < cells; b1 += h1) {
    for (std::uint32_t b2 = 0; b2 < cells; b2 += h2) {
      double sum = 0.0;
      for (std::uint32_t j1 = b1; j1 < b1 + h1; ++j1)
        for (std::uint32_t j2 = b2; j2 < b2 + h2; ++j2) sum += f.at(j1, j2);
      const double avg = sum * inv;
      for (std::uint32_t j1 = b1; j1 < b1 + h1; ++j1)
        for (std::uint32_t j2 = b2; j2 < b2 + h2; ++j2) out.at(j1, j2) = avg;
    }
  }
  return out;
}

GridFunction cond_expect_spectral(const GridFunction& f, SpectralIndex n) {
  check_scale(f, n);
  const std::uint32_t lim1 = std::uint32_t{1} << n.n1;
  const std::uint32_t lim2 = std::uint32_t{1} << n.n2;
  return spectral_project(
      f, [&](SpectralIndex idx) { return idx.n1 < lim1 && idx.n2 < lim2; });
}

GridFunction mart_diff(const GridFunction& f, SpectralIndex k) {
  check_scale(f, k);
  GridFunction out = cond_expect(f, k);
  if (k.n1 > 0) out -= cond_expect(f, {k.n1 - 1, k.n2});
  if (k.n2 > 0) out -= cond_expect(f, {k.n1, k.n2 - 1});
  if (k.n1 > 0 && k.n2 > 0) out += cond_expect(f, {k.n1 - 1, k.n2 - 1});
  return out;
}

GridFunction mart_diff_spectral(const GridFunction& f, SpectralIndex k) {
  check_scale(f, k);
  const DeltaBlock2D d = delta_block_2d(k);
  return spectral_project(f, [&](SpectralIndex idx) {
    return d.i1.contains(idx.n1) && d.i2.contains(idx.n2);
  });
}

GridFunction square_function(const GridFunction& f) {
  const int m = f.resolution().m();
  const std::uint32_t cells = f.cells();
  // Cache E_{n1,n2} for all scales, then form the four-term differences.
  std::vector<std::vector<GridFunction>> e;
  e.reserve(m + 1);
  for (int n1 = 0; n1 <= m; ++n1) {
    std::vector<GridFunction> row;
    row.reserve(m + 1);
    for (int n2 = 0; n2 <= m; ++n2)
      row.push_back(cond_expect(f, {static_cast<std::uint32_t>(n1),
                                    static_cast<std::uint32_t>(n2)}));
    e.push_back(std::move(row));
  }
  GridFunction acc(f.resolution());
  for (int k1 = 0; k1 <= m; ++k1) {
    for (int k2 = 0; k2 <= m; ++k2) {
      GridFunction d = e[k1][k2];
      if (k1 > 0) d -= e[k1 - 1][k2];
      if (k2 > 0) d -= e[k1][k2 - 1];
      if (k1 > 0 && k2 > 0) d += e[k1 - 1][k2 - 1];
      for (std::uint32_t j1 = 0; j1 < cells; ++j1)
        for (std::uint32_t j2 = 0; j2 < cells; ++j2)
          acc.at(j1, j2) += d.at(j1, j2) * d.at(j1, j2);
    }
  }
  for (double& v : acc.values()) v = std::sqrt(v);
  return acc;
}

double lp_norm(const GridFunction& f, double p) {
  if (!(p > 0.0)) throw std::domain_error("lp_norm requires p > 0");
  const double measure = std::ldexp(1.0, -2 * f.resolution().m());
  double sum = 0.0;
  if (p == 2.0) {
    for (double v : f.values()) sum += v * v;
    return std::sqrt(sum * measure);
  }
  for (double v : f.values()) sum += std::pow(std::fabs(v), p);
  return std::pow(sum * measure, 1.0 / p);
}

double hardy_norm(const GridFunction& f, double p) {
  return lp_norm(square_function(f), p);
}

GridFunction pointwise_l2(const std::vector<GridFunction>& family,
                          std::optional<Resolution> res) {
  if (family.empty()) {
    if (!res) throw std::invalid_argument("empty family without resolution");
    return GridFunction(*res);
  }
  GridFunction acc(family.front().resolution());
  for (const GridFunction& f : family) {
    acc.require_same_resolution(f);
    auto av = acc.values();
    auto fv = f.values();
    for (std::size_t i = 0; i < av.size(); ++i) av[i] += fv[i] * fv[i];
  }
  for (double& v : acc.values()) v = std::sqrt(v);
  return acc;
}

namespace {

struct SupportBox {
  std::uint32_t j1_lo, j1_hi, j2_lo, j2_hi;  // half-open cell ranges
};

SupportBox support_cells(DyadicSpatialRect F, Resolution m) {
  if (F.n1 > m.m() || F.n2 > m.m())
    throw ResolutionError("dyadic rectangle finer than grid resolution");
  const std::uint32_t h1 = std::uint32_t{1} << (m.m() - F.n1);
  const std::uint32_t h2 = std::uint32_t{1} << (m.m() - F.n2);
  return {F.k1 * h1, (F.k1 + 1) * h1, F.k2 * h2, (F.k2 + 1) * h2};
}

}  // namespace

RectangleAtomSpec make_rectangle_atom(DyadicSpatialRect F, double p,
                                      std::uint64_t seed, Resolution m) {
  if (!(p > 0.0 && p <= 1.0))
    throw std::domain_error("atom exponent p must lie in (0, 1]");
  const SupportBox box = support_cells(F, m);
  const std::uint32_t rows = box.j1_hi - box.j1_lo;
  const std::uint32_t cols = box.j2_hi - box.j2_lo;
  RectangleAtomSpec atom{F, p, GridFunction(m), false};
  if (rows < 2 || cols < 2) {
    // A single cell per line cannot carry nonzero values with zero line sums.
    atom.degenerate = true;
    return atom;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  GridFunction& a = atom.values;
  for (std::uint32_t j1 = box.j1_lo; j1 < box.j1_hi; ++j1)
    for (std::uint32_t j2 = box.j2_lo; j2 < box.j2_hi; ++j2)
      a.at(j1, j2) = dist(rng);
  // Row means first, then column means; the column pass preserves the zero
  // row sums, so two passes are exact.
  for (std::uint32_t j1 = box.j1_lo; j1 < box.j1_hi; ++j1) {
    double mean = 0.0;
    for (std::uint32_t j2 = box.j2_lo; j2 < box.j2_hi; ++j2)
      mean += a.at(j1, j2);
    mean /= cols;
    for (std::uint32_t j2 = box.j2_lo; j2 < box.j2_hi; ++j2)
      a.at(j1, j2) -= mean;
  }
  for (std::uint32_t j2 = box.j2_lo; j2 < box.j2_hi; ++j2) {
    double mean = 0.0;
    for (std::uint32_t j1 = box.j1_lo; j1 < box.j1_hi; ++j1)
      mean += a.at(j1, j2);
    mean /= rows;
    for (std::uint32_t j1 = box.j1_lo; j1 < box.j1_hi; ++j1)
      a.at(j1, j2) -= mean;
  }
  const double norm = lp_norm(a, 2.0);
  if (norm == 0.0) {
    atom.degenerate = true;
    return atom;
  }
  a *= std::pow(F.measure(), 0.5 - 1.0 / p) / norm;
  return atom;
}

bool is_rectangle_atom(const GridFunction& f, DyadicSpatialRect F, double p,
                       double tol) {
  const SupportBox box = support_cells(F, f.resolution());
  const std::uint32_t cells = f.cells();
  for (std::uint32_t j1 = 0; j1 < cells; ++j1)
    for (std::uint32_t j2 = 0; j2 < cells; ++j2)
      if ((j1 < box.j1_lo || j1 >= box.j1_hi || j2 < box.j2_lo ||
           j2 >= box.j2_hi) &&
          std::fabs(f.at(j1, j2)) > tol)
        return false;
  if (lp_norm(f, 2.0) > std::pow(F.measure(), 0.5 - 1.0 / p) + tol)
    return false;
  const double cell_width = std::ldexp(1.0, -f.resolution().m());
  for (std::uint32_t j1 = 0; j1 < cells; ++j1) {
    double line = 0.0;
    for (std::uint32_t j2 = 0; j2 < cells; ++j2) line += f.at(j1, j2);
    if (std::fabs(line * cell_width) > tol) return false;
  }
  for (std::uint32_t j2 = 0; j2 < cells; ++j2) {
    double line = 0.0;
    for (std::uint32_t j1 = 0; j1 < cells; ++j1) line += f.at(j1, j2);
    if (std::fabs(line * cell_width) > tol) return false;
  }
  return true;
}

}  // namespace walshlp
