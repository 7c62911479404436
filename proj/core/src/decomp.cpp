#include "walshlp/decomp.hpp"

#include <bit>
#include <map>
#include <set>

namespace walshlp {

Interval1D delta_block_1d(std::uint32_t k) {
  if (k == 0) return {0, 1};
  return {std::uint32_t{1} << (k - 1), std::uint32_t{1} << k};
}

DeltaBlock2D delta_block_2d(SpectralIndex k) {
  return {delta_block_1d(k.n1), delta_block_1d(k.n2)};
}

BlockDecomposition1D decompose_interval(Interval1D iv) {
  if (iv.a >= iv.b) throw std::invalid_argument("invalid interval: a >= b");
  const std::uint32_t a = iv.a, b = iv.b;
  BlockDecomposition1D dec;
  dec.singleton = a;
  // s = highest bit where a and b differ. Rising blocks come from the zero
  // bits of a below s, falling blocks from the one bits of b below s; each
  // xor-shifts onto a dyadic block [2^e, 2^(e+1) - 1].
  const int s = std::bit_width(a ^ b) - 1;
  for (int e = 0; e < s; ++e) {
    if (((a >> e) & 1u) == 0) {
      const std::uint32_t lo = ((a >> (e + 1)) << (e + 1)) | (1u << e);
      dec.rising.push_back(
          {static_cast<std::uint32_t>(e), {lo, lo + (1u << e)}});
    }
  }
  for (int e = s - 1; e >= 0; --e) {
    if ((b >> e) & 1u) {
      const std::uint32_t lo = (b >> (e + 1)) << (e + 1);
      dec.falling.push_back(
          {static_cast<std::uint32_t>(e), {lo, lo + (1u << e)}});
    }
  }
  return dec;
}

namespace {

struct AxisPart {
  Interval1D block;
  bool falling = false;
  std::uint32_t diff = 0;  // 1D martingale-difference index
};

std::vector<AxisPart> axis_parts(Interval1D iv) {
  BlockDecomposition1D d = decompose_interval(iv);
  std::vector<AxisPart> parts;
  parts.push_back({{d.singleton, d.singleton + 1}, false, 0});
  for (const Block1D& r : d.rising)
    parts.push_back({r.block, false, r.exponent + 1});
  for (const Block1D& f : d.falling)
    parts.push_back({f.block, true, f.exponent + 1});
  return parts;
}

}  // namespace

std::string to_string(BlockClass cls) {
  switch (cls) {
    case BlockClass::A: return "A";
    case BlockClass::B: return "B";
    case BlockClass::C: return "C";
    case BlockClass::D: return "D";
  }
  return "?";
}

RectangleDecomposition decompose_rectangle(const SpectralRectangle& rect) {
  if (rect.i1.a >= rect.i1.b || rect.i2.a >= rect.i2.b)
    throw std::invalid_argument("invalid rectangle");
  const std::vector<AxisPart> p1 = axis_parts(rect.i1);
  const std::vector<AxisPart> p2 = axis_parts(rect.i2);
  RectangleDecomposition dec;
  dec.rect = rect;
  for (const AxisPart& x : p1) {
    for (const AxisPart& y : p2) {
      MappedBlock mb;
      mb.b1 = x.block;
      mb.b2 = y.block;
      mb.cls = x.falling ? (y.falling ? BlockClass::B : BlockClass::C)
                         : (y.falling ? BlockClass::D : BlockClass::A);
      mb.vertex = {x.falling ? rect.i1.b : rect.i1.a,
                   y.falling ? rect.i2.b : rect.i2.a};
      mb.diff_index = {x.diff, y.diff};
      dec.blocks.push_back(mb);
    }
  }
  return dec;
}

VerificationResult verify_decomposition(const SpectralRectangle& rect,
                                        const RectangleDecomposition& dec) {
  VerificationResult res;
  auto fail = [&](std::string msg) {
    res.ok = false;
    res.issues.push_back(std::move(msg));
  };

  std::map<std::pair<std::uint32_t, std::uint32_t>, int> cover;
  for (const MappedBlock& mb : dec.blocks) {
    for (std::uint32_t n1 = mb.b1.a; n1 < mb.b1.b; ++n1)
      for (std::uint32_t n2 = mb.b2.a; n2 < mb.b2.b; ++n2)
        ++cover[{n1, n2}];
  }
  for (const auto& [idx, count] : cover) {
    if (count > 1)
      fail("index (" + std::to_string(idx.first) + "," +
           std::to_string(idx.second) + ") covered " + std::to_string(count) +
           " times");
    if (!rect.i1.contains(idx.first) || !rect.i2.contains(idx.second))
      fail("index (" + std::to_string(idx.first) + "," +
           std::to_string(idx.second) + ") outside rectangle");
  }
  for (std::uint32_t n1 = rect.i1.a; n1 < rect.i1.b; ++n1)
    for (std::uint32_t n2 = rect.i2.a; n2 < rect.i2.b; ++n2)
      if (!cover.count({n1, n2}))
        fail("index (" + std::to_string(n1) + "," + std::to_string(n2) +
             ") not covered");

  for (std::size_t i = 0; i < dec.blocks.size(); ++i) {
    const MappedBlock& mb = dec.blocks[i];
    const DeltaBlock2D delta = delta_block_2d(mb.diff_index);
    std::set<std::pair<std::uint32_t, std::uint32_t>> shifted, expected;
    for (std::uint32_t n1 = mb.b1.a; n1 < mb.b1.b; ++n1)
      for (std::uint32_t n2 = mb.b2.a; n2 < mb.b2.b; ++n2)
        shifted.insert({mb.vertex.n1 ^ n1, mb.vertex.n2 ^ n2});
    for (std::uint32_t n1 = delta.i1.a; n1 < delta.i1.b; ++n1)
      for (std::uint32_t n2 = delta.i2.a; n2 < delta.i2.b; ++n2)
        expected.insert({n1, n2});
    if (shifted != expected)
      fail("block " + std::to_string(i) +
           ": vertex xor block is not delta_{" +
           std::to_string(mb.diff_index.n1) + "," +
           std::to_string(mb.diff_index.n2) + "}");
  }
  return res;
}

namespace {

// External convention: closed intervals [a, b-1].
nlohmann::json interval_json(Interval1D iv) {
  return {{"a", iv.a}, {"b_minus_1", iv.b - 1}};
}

}  // namespace

nlohmann::json to_json(const RectangleDecomposition& dec) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const MappedBlock& mb : dec.blocks) {
    blocks.push_back({
        {"i1", interval_json(mb.b1)},
        {"i2", interval_json(mb.b2)},
        {"cls", to_string(mb.cls)},
        {"vertex", {mb.vertex.n1, mb.vertex.n2}},
        {"diff_index", {mb.diff_index.n1, mb.diff_index.n2}},
    });
  }
  return {
      {"rect",
       {{"i1", interval_json(dec.rect.i1)}, {"i2", interval_json(dec.rect.i2)}}},
      {"blocks", blocks},
  };
}

}  // namespace walshlp
