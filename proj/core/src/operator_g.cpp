#include "walshlp/operator_g.hpp"

#include <algorithm>
#include <cmath>

#include "walshlp/martingale.hpp"
#include "walshlp/walsh.hpp"

namespace walshlp {

void VectorFunction::set(ComponentKey key, GridFunction g) {
  if (g.resolution() != resolution)
    throw ResolutionError("component resolution mismatch");
  components.insert_or_assign(std::move(key), std::move(g));
}

const GridFunction* VectorFunction::find(const ComponentKey& key) const {
  auto it = components.find(key);
  return it == components.end() ? nullptr : &it->second;
}

double VectorFunction::lp_l2_norm(double p) const {
  std::vector<GridFunction> family;
  family.reserve(components.size());
  for (const auto& [key, g] : components) family.push_back(g);
  return lp_norm(pointwise_l2(family, resolution), p);
}

namespace {

std::vector<SpectralIndex> shifted_block(const GEntry& e) {
  const DeltaBlock2D d = delta_block_2d(e.diff_index);
  std::vector<SpectralIndex> pts;
  pts.reserve(std::size_t{d.i1.size()} * d.i2.size());
  for (std::uint32_t n1 = d.i1.a; n1 < d.i1.b; ++n1)
    for (std::uint32_t n2 = d.i2.a; n2 < d.i2.b; ++n2)
      pts.push_back({e.shift.n1 ^ n1, e.shift.n2 ^ n2});
  return pts;
}

std::string entry_str(const GEntry& e) {
  return "(" + e.label + ", k=(" + std::to_string(e.diff_index.n1) + "," +
         std::to_string(e.diff_index.n2) + "), a=(" +
         std::to_string(e.shift.n1) + "," + std::to_string(e.shift.n2) + "))";
}

}  // namespace

FamilyValidation validate_shift_family(const GShiftFamily& fam, Resolution m) {
  FamilyValidation res;
  auto fail = [&](std::string msg) {
    res.ok = false;
    res.violations.push_back(std::move(msg));
  };
  const std::uint32_t cells = m.cells();
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> occupied;
  for (std::size_t i = 0; i < fam.entries.size(); ++i) {
    const GEntry& e = fam.entries[i];
    if (e.diff_index.n1 > static_cast<std::uint32_t>(m.m()) ||
        e.diff_index.n2 > static_cast<std::uint32_t>(m.m())) {
      fail("entry " + entry_str(e) + ": diff index exceeds resolution");
      continue;
    }
    for (SpectralIndex n : shifted_block(e)) {
      if (n.n1 >= cells || n.n2 >= cells) {
        fail("entry " + entry_str(e) + ": shifted block leaves [0,2^m)^2 at (" +
             std::to_string(n.n1) + "," + std::to_string(n.n2) + ")");
        continue;
      }
      auto [it, inserted] = occupied.try_emplace({n.n1, n.n2}, i);
      if (!inserted)
        fail("entries " + entry_str(fam.entries[it->second]) + " and " +
             entry_str(e) + " intersect at (" + std::to_string(n.n1) + "," +
             std::to_string(n.n2) + ")");
    }
  }
  return res;
}

GridFunction apply_g(const GShiftFamily& fam, const VectorFunction& h) {
  const FamilyValidation v = validate_shift_family(fam, h.resolution);
  if (!v.ok)
    throw std::invalid_argument("invalid shift family: " + v.violations.front());
  GridFunction out(h.resolution);
  for (const GEntry& e : fam.entries) {
    const GridFunction* comp = h.find({e.label, e.diff_index});
    if (!comp) continue;  // missing components are zero
    out += modulate(mart_diff(*comp, e.diff_index), e.shift);
  }
  return out;
}

GPipeline build_from_partition(const std::vector<SpectralRectangle>& rects,
                               const std::vector<GridFunction>& fs) {
  if (rects.size() != fs.size())
    throw std::invalid_argument("rectangle and function counts differ");
  if (fs.empty()) throw std::invalid_argument("empty partition");
  const Resolution res = fs.front().resolution();
  const std::uint32_t cells = res.cells();

  for (std::size_t i = 0; i < rects.size(); ++i) {
    if (rects[i].i1.b > cells || rects[i].i2.b > cells)
      throw SpectrumError("rectangle " + std::to_string(i) +
                          " leaves [0,2^m)^2");
    for (std::size_t j = i + 1; j < rects.size(); ++j) {
      const bool overlap =
          rects[i].i1.a < rects[j].i1.b && rects[j].i1.a < rects[i].i1.b &&
          rects[i].i2.a < rects[j].i2.b && rects[j].i2.a < rects[i].i2.b;
      if (overlap)
        throw std::invalid_argument("rectangles " + std::to_string(i) +
                                    " and " + std::to_string(j) + " intersect");
    }
  }

  GPipeline pipe{GShiftFamily{}, VectorFunction(res)};
  for (std::size_t i = 0; i < rects.size(); ++i) {
    fs[i].require_same_resolution(fs.front());
    const CoeffMatrix c = walsh_transform_2d(fs[i]);
    double max_in = 0.0, max_out = 0.0;
    for (std::uint32_t n1 = 0; n1 < cells; ++n1) {
      for (std::uint32_t n2 = 0; n2 < cells; ++n2) {
        double& bucket = rects[i].contains({n1, n2}) ? max_in : max_out;
        bucket = std::max(bucket, std::fabs(c.at(n1, n2)));
      }
    }
    if (max_out > 1e-9 * std::max(1.0, max_in))
      throw SpectrumError("function " + std::to_string(i) +
                          " has spectrum outside its rectangle");

    const RectangleDecomposition dec = decompose_rectangle(rects[i]);
    for (std::size_t b = 0; b < dec.blocks.size(); ++b) {
      const MappedBlock& mb = dec.blocks[b];
      CoeffMatrix masked(res);
      for (std::uint32_t n1 = mb.b1.a; n1 < mb.b1.b; ++n1)
        for (std::uint32_t n2 = mb.b2.a; n2 < mb.b2.b; ++n2)
          masked.at(n1, n2) = c.at(n1, n2);
      const std::string label =
          "r" + std::to_string(i) + "b" + std::to_string(b);
      GridFunction g = modulate(walsh_inverse_2d(masked), mb.vertex);
      pipe.family.entries.push_back({label, mb.diff_index, mb.vertex});
      pipe.h.set({label, mb.diff_index}, std::move(g));
    }
  }
  return pipe;
}

nlohmann::json to_json(const GShiftFamily& fam) {
  nlohmann::json entries = nlohmann::json::array();
  for (const GEntry& e : fam.entries)
    entries.push_back({{"label", e.label},
                       {"diff_index", {e.diff_index.n1, e.diff_index.n2}},
                       {"shift", {e.shift.n1, e.shift.n2}}});
  return {{"entries", entries}};
}

GShiftFamily shift_family_from_json(const nlohmann::json& j) {
  GShiftFamily fam;
  for (const auto& e : j.at("entries")) {
    fam.entries.push_back(
        {e.at("label").get<std::string>(),
         {e.at("diff_index")[0].get<std::uint32_t>(),
          e.at("diff_index")[1].get<std::uint32_t>()},
         {e.at("shift")[0].get<std::uint32_t>(),
          e.at("shift")[1].get<std::uint32_t>()}});
  }
  return fam;
}

}  // namespace walshlp
