#ifndef WALSHLP_OPERATOR_G_HPP
#define WALSHLP_OPERATOR_G_HPP

#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "walshlp/decomp.hpp"
#include "walshlp/types.hpp"

namespace walshlp {

/// One entry (j, k, a_{j,k}) of a shift family: the component labeled j with
/// martingale-difference index k, modulated by the character w_{a_{j,k}}.
struct GEntry {
  std::string label;
  SpectralIndex diff_index;
  SpectralIndex shift;
};

/// Family inducing the operator G; the shifted blocks shift xor delta_k must
/// be pairwise disjoint subsets of [0, 2^m)^2.
struct GShiftFamily {
  std::vector<GEntry> entries;
};

struct ComponentKey {
  std::string label;
  SpectralIndex diff_index;

  friend bool operator<(const ComponentKey& a, const ComponentKey& b) {
    if (a.label != b.label) return a.label < b.label;
    if (a.diff_index.n1 != b.diff_index.n1)
      return a.diff_index.n1 < b.diff_index.n1;
    return a.diff_index.n2 < b.diff_index.n2;
  }
};

/// Finitely supported vector-valued function; components missing from the
/// map are zero.
struct VectorFunction {
  explicit VectorFunction(Resolution res) : resolution(res) {}

  Resolution resolution;
  std::map<ComponentKey, GridFunction> components;

  void set(ComponentKey key, GridFunction g);
  const GridFunction* find(const ComponentKey& key) const;

  /// ||h||_{L^p(l^2)}: pointwise l2 across components, then L^p.
  double lp_l2_norm(double p) const;
};

struct FamilyValidation {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Enumerates every shifted block and reports out-of-range indices and
/// pairwise intersections.
FamilyValidation validate_shift_family(const GShiftFamily& fam, Resolution m);

/// (G h)(x) = sum_{(j,k)} w_{a_{j,k}}(x) (Delta_k h_{j,k})(x).
/// The family is validated before application; summation follows entry order.
GridFunction apply_g(const GShiftFamily& fam, const VectorFunction& h);

struct GPipeline {
  GShiftFamily family;
  VectorFunction h;
};

/// Proof-pipeline builder: decomposes each rectangle, projects its function
/// onto every mapped block and modulates by the block vertex, so that
/// apply_g reconstructs sum f_i exactly. Rectangles must be pairwise
/// disjoint and spec f_i must lie inside rects[i].
GPipeline build_from_partition(const std::vector<SpectralRectangle>& rects,
                               const std::vector<GridFunction>& fs);

nlohmann::json to_json(const GShiftFamily& fam);
GShiftFamily shift_family_from_json(const nlohmann::json& j);

}  // namespace walshlp

#endif  // WALSHLP_OPERATOR_G_HPP
