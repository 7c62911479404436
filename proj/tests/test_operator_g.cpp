#include <doctest.h>

#include <random>

#include "walshlp/harness.hpp"
#include "walshlp/martingale.hpp"
#include "walshlp/operator_g.hpp"
#include "walshlp/walsh.hpp"

using namespace walshlp;

namespace {

GridFunction random_grid(Resolution res, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  GridFunction f(res);
  for (double& v : f.values()) v = gauss(rng);
  return f;
}

}  // namespace

TEST_CASE("validate_shift_family") {
  const Resolution res(4);
  SUBCASE("single entry is fine") {
    CHECK(validate_shift_family({{{"j0", {2, 2}, {0, 0}}}}, res).ok);
  }
  SUBCASE("identical shifted blocks collide") {
    const FamilyValidation v = validate_shift_family(
        {{{"j0", {1, 1}, {0, 0}}, {"j1", {1, 1}, {0, 0}}}, }, res);
    CHECK_FALSE(v.ok);
    CHECK_FALSE(v.violations.empty());
  }
  SUBCASE("out-of-range shifted block") {
    const FamilyValidation v =
        validate_shift_family({{{"j0", {1, 0}, {16, 0}}}}, res);
    CHECK_FALSE(v.ok);
  }
  SUBCASE("families from disjoint rectangle partitions validate") {
    const std::vector<SpectralRectangle> rects =
        gen_guillotine_partition(res, 42, 1);
    std::vector<GridFunction> fs;
    for (std::size_t i = 0; i < rects.size(); ++i)
      fs.push_back(sample_spectral_function(rects[i], res, 100 + i,
                                            CoefficientDist::Gaussian));
    const GPipeline pipe = build_from_partition(rects, fs);
    CHECK(validate_shift_family(pipe.family, res).ok);
  }
}

TEST_CASE("apply_g basics") {
  const Resolution res(4);
  const GridFunction f = random_grid(res, 1);

  SUBCASE("trivial family reproduces the mean") {
    GShiftFamily fam{{{"j0", {0, 0}, {0, 0}}}};
    VectorFunction h(res);
    h.set({"j0", {0, 0}}, f);
    const GridFunction g = apply_g(fam, h);
    CHECK((g - cond_expect(f, {0, 0})).max_abs() <= 1e-12);
  }
  SUBCASE("missing components are zero") {
    GShiftFamily fam{{{"j0", {1, 1}, {0, 0}}, {"j1", {2, 2}, {0, 0}}}};
    VectorFunction h(res);
    h.set({"j0", {1, 1}}, f);
    const GridFunction only_first = apply_g(fam, h);
    const GridFunction expected = modulate(mart_diff(f, {1, 1}), {0, 0});
    CHECK((only_first - expected).max_abs() <= 1e-12);
  }
  SUBCASE("invalid family is rejected before application") {
    GShiftFamily fam{{{"j0", {1, 1}, {0, 0}}, {"j1", {1, 1}, {0, 0}}}};
    VectorFunction h(res);
    CHECK_THROWS_AS(apply_g(fam, h), std::invalid_argument);
  }
  SUBCASE("L2 bookkeeping on random input") {
    GShiftFamily fam{{{"j0", {1, 1}, {0, 0}},
                      {"j1", {2, 3}, {0, 0}},
                      {"j2", {4, 2}, {0, 0}}}};
    VectorFunction h(res);
    h.set({"j0", {1, 1}}, random_grid(res, 2));
    h.set({"j1", {2, 3}}, random_grid(res, 3));
    h.set({"j2", {4, 2}}, random_grid(res, 4));
    const GridFunction g = apply_g(fam, h);
    double rhs = 0.0;
    for (const GEntry& e : fam.entries) {
      const double n = lp_norm(mart_diff(*h.find({e.label, e.diff_index}),
                                         e.diff_index),
                               2.0);
      rhs += n * n;
    }
    const double lhs = lp_norm(g, 2.0);
    CHECK(lhs * lhs == doctest::Approx(rhs).epsilon(1e-10));
    CHECK(lhs <= (1.0 + 1e-12) * h.lp_l2_norm(2.0));
  }
  SUBCASE("atom-supported components keep G inside the rectangle") {
    const DyadicSpatialRect F = make_dyadic_rect(1, 1, 1, 0);
    const RectangleAtomSpec atom = make_rectangle_atom(F, 1.0, 77, res);
    REQUIRE_FALSE(atom.degenerate);
    GShiftFamily fam{{{"j0", {1, 1}, {0, 0}},
                      {"j1", {2, 3}, {0, 0}},
                      {"j2", {3, 2}, {5, 9}}}};
    VectorFunction h(res);
    for (const GEntry& e : fam.entries)
      h.set({e.label, e.diff_index}, atom.values);
    const GridFunction g = apply_g(fam, h);
    const std::uint32_t h1 = res.cells() >> F.n1;
    const std::uint32_t h2 = res.cells() >> F.n2;
    for (std::uint32_t j1 = 0; j1 < res.cells(); ++j1)
      for (std::uint32_t j2 = 0; j2 < res.cells(); ++j2)
        if (j1 / h1 != F.k1 || j2 / h2 != F.k2)
          CHECK(std::fabs(g.at(j1, j2)) <= 1e-12);
  }
}

TEST_CASE("build_from_partition") {
  const Resolution res(4);

  SUBCASE("single unit rectangle with a constant function") {
    GridFunction f(res);
    for (double& v : f.values()) v = 3.25;
    const GPipeline pipe = build_from_partition({{{0, 1}, {0, 1}}}, {f});
    CHECK(pipe.h.components.size() == 1);
    const GridFunction g = apply_g(pipe.family, pipe.h);
    for (double v : g.values()) CHECK(v == doctest::Approx(3.25).epsilon(1e-12));
  }
  SUBCASE("two-rectangle reconstruction at m=4") {
    const std::vector<SpectralRectangle> rects{{{0, 7}, {0, 16}},
                                               {{7, 16}, {0, 16}}};
    std::vector<GridFunction> fs;
    for (std::size_t i = 0; i < rects.size(); ++i)
      fs.push_back(sample_spectral_function(rects[i], res, 500 + i,
                                            CoefficientDist::Gaussian));
    const GPipeline pipe = build_from_partition(rects, fs);
    const GridFunction g = apply_g(pipe.family, pipe.h);
    const GridFunction sum = fs[0] + fs[1];
    CHECK((g - sum).max_abs() <= 1e-10);
  }
  SUBCASE("every component has spectrum inside its delta block") {
    const std::vector<SpectralRectangle> rects{{{3, 12}, {1, 3}}};
    const std::vector<GridFunction> fs{sample_spectral_function(
        rects[0], res, 321, CoefficientDist::Gaussian)};
    const GPipeline pipe = build_from_partition(rects, fs);
    for (const GEntry& e : pipe.family.entries) {
      const GridFunction* comp = pipe.h.find({e.label, e.diff_index});
      REQUIRE(comp);
      const DeltaBlock2D d = delta_block_2d(e.diff_index);
      const CoeffMatrix c = walsh_transform_2d(*comp);
      for (std::uint32_t n1 = 0; n1 < res.cells(); ++n1)
        for (std::uint32_t n2 = 0; n2 < res.cells(); ++n2)
          if (!d.i1.contains(n1) || !d.i2.contains(n2))
            CHECK(std::fabs(c.at(n1, n2)) <= 1e-12);
    }
  }
  SUBCASE("overlapping rectangles are rejected") {
    const std::vector<SpectralRectangle> rects{{{0, 8}, {0, 8}},
                                               {{4, 12}, {0, 8}}};
    const std::vector<GridFunction> fs{
        sample_spectral_function(rects[0], res, 1, CoefficientDist::Gaussian),
        sample_spectral_function(rects[1], res, 2, CoefficientDist::Gaussian)};
    CHECK_THROWS_AS(build_from_partition(rects, fs), std::invalid_argument);
  }
  SUBCASE("spectrum leakage is rejected") {
    const SpectralRectangle small{{0, 2}, {0, 2}};
    const GridFunction wide = sample_spectral_function(
        {{0, 16}, {0, 16}}, res, 3, CoefficientDist::Gaussian);
    CHECK_THROWS_AS(build_from_partition({small}, {wide}), SpectrumError);
  }
}

TEST_CASE("shift family JSON round trip") {
  GShiftFamily fam{{{"r0b0", {3, 1}, {12, 3}}, {"r1b2", {0, 0}, {5, 9}}}};
  const GShiftFamily back = shift_family_from_json(to_json(fam));
  REQUIRE(back.entries.size() == fam.entries.size());
  for (std::size_t i = 0; i < fam.entries.size(); ++i) {
    CHECK(back.entries[i].label == fam.entries[i].label);
    CHECK(back.entries[i].diff_index == fam.entries[i].diff_index);
    CHECK(back.entries[i].shift == fam.entries[i].shift);
  }
}
