#ifndef WALSHLP_TYPES_HPP
#define WALSHLP_TYPES_HPP

#include <cmath>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace walshlp {

/// Grid memory bound: 2^m x 2^m doubles per function.
inline constexpr int kMaxResolution = 16;

struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SpectrumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dyadic grid resolution: 2^m cells per axis, spectra in [0, 2^m).
class Resolution {
 public:
  explicit Resolution(int m) : m_(m) {
    if (m < 0 || m > kMaxResolution)
      throw ResolutionError("resolution m out of range [0, " +
                            std::to_string(kMaxResolution) + "]: " +
                            std::to_string(m));
  }
  int m() const { return m_; }
  std::uint32_t cells() const { return std::uint32_t{1} << m_; }
  friend bool operator==(Resolution a, Resolution b) { return a.m_ == b.m_; }
  friend bool operator!=(Resolution a, Resolution b) { return a.m_ != b.m_; }

 private:
  int m_;
};

/// Element of Z_+^2; ordering is the componentwise partial order.
struct SpectralIndex {
  std::uint32_t n1 = 0;
  std::uint32_t n2 = 0;

  friend bool operator==(const SpectralIndex&, const SpectralIndex&) = default;
};

/// Componentwise partial order (not the map ordering).
inline bool leq(SpectralIndex a, SpectralIndex b) {
  return a.n1 <= b.n1 && a.n2 <= b.n2;
}

/// Strict total order for use as a container key.
struct SpectralIndexLess {
  bool operator()(SpectralIndex a, SpectralIndex b) const {
    return a.n1 != b.n1 ? a.n1 < b.n1 : a.n2 < b.n2;
  }
};

inline SpectralIndex xor_index(SpectralIndex n, SpectralIndex m) {
  return {n.n1 ^ m.n1, n.n2 ^ m.n2};
}

namespace detail {
inline void check_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
}
}  // namespace detail

/// Real-valued function on [0,1)^2, constant on 2^-m x 2^-m dyadic cells.
/// Cell (j1, j2) covers [j1 2^-m, (j1+1) 2^-m) x [j2 2^-m, (j2+1) 2^-m).
class GridFunction {
 public:
  explicit GridFunction(Resolution res)
      : res_(res), values_(std::size_t{res.cells()} * res.cells(), 0.0) {}
  GridFunction(Resolution res, std::vector<double> values)
      : res_(res), values_(std::move(values)) {
    if (values_.size() != std::size_t{res.cells()} * res.cells())
      throw ShapeError("GridFunction value count does not match resolution");
    detail::check_finite(values_);
  }

  Resolution resolution() const { return res_; }
  std::uint32_t cells() const { return res_.cells(); }

  double& at(std::uint32_t j1, std::uint32_t j2) {
    return values_[std::size_t{j1} * res_.cells() + j2];
  }
  double at(std::uint32_t j1, std::uint32_t j2) const {
    return values_[std::size_t{j1} * res_.cells() + j2];
  }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  GridFunction& operator+=(const GridFunction& o) {
    require_same_resolution(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  GridFunction& operator-=(const GridFunction& o) {
    require_same_resolution(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  GridFunction& operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
  }

  friend GridFunction operator+(GridFunction a, const GridFunction& b) {
    a += b;
    return a;
  }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) {
    a -= b;
    return a;
  }
  friend GridFunction operator*(GridFunction a, double c) {
    a *= c;
    return a;
  }

  double max_abs() const {
    double r = 0.0;
    for (double v : values_) r = std::max(r, std::fabs(v));
    return r;
  }

  void require_same_resolution(const GridFunction& o) const {
    if (res_ != o.res_)
      throw ResolutionError("GridFunction resolution mismatch");
  }

 private:
  Resolution res_;
  std::vector<double> values_;
};

/// Two-parameter Walsh coefficients: entry (n1, n2) = <f, w_{n1,n2}>.
class CoeffMatrix {
 public:
  explicit CoeffMatrix(Resolution res)
      : res_(res), coeffs_(std::size_t{res.cells()} * res.cells(), 0.0) {}
  CoeffMatrix(Resolution res, std::vector<double> coeffs)
      : res_(res), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != std::size_t{res.cells()} * res.cells())
      throw ShapeError("CoeffMatrix entry count does not match resolution");
  }

  Resolution resolution() const { return res_; }
  std::uint32_t cells() const { return res_.cells(); }

  double& at(std::uint32_t n1, std::uint32_t n2) {
    return coeffs_[std::size_t{n1} * res_.cells() + n2];
  }
  double at(std::uint32_t n1, std::uint32_t n2) const {
    return coeffs_[std::size_t{n1} * res_.cells() + n2];
  }

  std::span<double> coeffs() { return coeffs_; }
  std::span<const double> coeffs() const { return coeffs_; }

 private:
  Resolution res_;
  std::vector<double> coeffs_;
};

}  // namespace walshlp

#endif  // WALSHLP_TYPES_HPP
