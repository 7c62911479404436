#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "walshlp/harness.hpp"
#include "walshlp/martingale.hpp"
#include "walshlp/walsh.hpp"

using namespace walshlp;

TEST_CASE("gen_guillotine_partition") {
  const Resolution res(5);
  SUBCASE("min_block = 2^m yields the single full rectangle") {
    const std::vector<SpectralRectangle> rects =
        gen_guillotine_partition(res, 1, 32);
    REQUIRE(rects.size() == 1);
    CHECK(rects[0] == SpectralRectangle{{0, 32}, {0, 32}});
  }
  SUBCASE("outputs are exact partitions") {
    for (std::uint64_t seed : {1ULL, 2ULL, 77ULL, 12345ULL}) {
      const std::vector<SpectralRectangle> rects =
          gen_guillotine_partition(res, seed, 1);
      std::uint64_t area = 0;
      for (const SpectralRectangle& r : rects) area += r.area();
      CHECK(area == 1024);  // generator already rejects overlap and gaps
    }
  }
  SUBCASE("seed determinism") {
    const auto a = gen_guillotine_partition(res, 99, 2);
    const auto b = gen_guillotine_partition(res, 99, 2);
    CHECK(a == b);
    const auto c = gen_guillotine_partition(res, 100, 2);
    CHECK(a != c);
  }
}

TEST_CASE("gen_row_band_partition covers with full-width bands") {
  const Resolution res(5);
  const std::vector<SpectralRectangle> rects =
      gen_row_band_partition(res, 3, 4);
  std::uint64_t area = 0;
  for (const SpectralRectangle& r : rects) {
    CHECK(r.i2 == Interval1D{0, 32});
    CHECK(r.i1.size() >= 4);
    area += r.area();
  }
  CHECK(area == 1024);
}

TEST_CASE("sample_spectral_function") {
  const Resolution res(4);
  SUBCASE("singleton spectrum gives a constant") {
    const GridFunction f = sample_spectral_function({{0, 1}, {0, 1}}, res, 5,
                                                    CoefficientDist::Gaussian);
    for (double v : f.values()) CHECK(v == f.at(0, 0));
  }
  SUBCASE("Plancherel against the drawn coefficients") {
    const SpectralRectangle I{{2, 9}, {4, 13}};
    const GridFunction f =
        sample_spectral_function(I, res, 6, CoefficientDist::Gaussian);
    const CoeffMatrix c = walsh_transform_2d(f);
    double sq = 0.0;
    for (std::uint32_t n1 = 0; n1 < res.cells(); ++n1)
      for (std::uint32_t n2 = 0; n2 < res.cells(); ++n2) {
        if (!I.contains({n1, n2}))
          CHECK(std::fabs(c.at(n1, n2)) <= 1e-12);
        sq += c.at(n1, n2) * c.at(n1, n2);
      }
    const double n2f = lp_norm(f, 2.0);
    CHECK(n2f * n2f == doctest::Approx(sq).epsilon(1e-12));
  }
  SUBCASE("projection contract") {
    const SpectralRectangle I{{3, 12}, {1, 3}};
    const GridFunction f =
        sample_spectral_function(I, res, 7, CoefficientDist::Rademacher);
    const GridFunction proj = spectral_project(
        f, [&](SpectralIndex n) { return I.contains(n); });
    CHECK((proj - f).max_abs() <= 1e-12);
  }
  SUBCASE("out-of-range rectangle") {
    CHECK_THROWS_AS(sample_spectral_function({{0, 17}, {0, 1}}, res, 1,
                                             CoefficientDist::Gaussian),
                    SpectrumError);
  }
}

TEST_CASE("lprf_ratio") {
  const Resolution res(4);
  SUBCASE("single function gives exactly 1") {
    const GridFunction f = sample_spectral_function({{0, 16}, {0, 16}}, res, 8,
                                                    CoefficientDist::Gaussian);
    for (double p : {1.1, 1.5, 2.0})
      CHECK(lprf_ratio({f}, p) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("p=2 is the Parseval surrogate") {
    const std::vector<SpectralRectangle> rects =
        gen_guillotine_partition(res, 17, 1);
    std::vector<GridFunction> fs;
    for (std::size_t i = 0; i < rects.size(); ++i)
      fs.push_back(sample_spectral_function(rects[i], res, 900 + i,
                                            CoefficientDist::Gaussian));
    CHECK(std::fabs(lprf_ratio(fs, 2.0) - 1.0) <= 1e-9);
  }
  SUBCASE("zero family is rejected") {
    CHECK_THROWS_AS(lprf_ratio({GridFunction(res)}, 1.5), std::domain_error);
  }
}

TEST_CASE("run_experiment") {
  ExperimentConfig cfg;
  cfg.m = 3;
  cfg.trials = 4;
  cfg.seed = 2024;
  cfg.p_list = {1.25, 2.0};

  SUBCASE("deterministic given (seed, cfg)") {
    const RatioReport a = run_experiment(cfg);
    const RatioReport b = run_experiment(cfg);
    CHECK(report_to_json(a).dump() == report_to_json(b).dump());
    CHECK(report_to_csv(a) == report_to_csv(b));
  }
  SUBCASE("p=2 record sits at 1 within 1e-9") {
    const RatioReport r = run_experiment(cfg);
    const auto it = std::find_if(r.records.begin(), r.records.end(),
                                 [](const PerPRecord& x) { return x.p == 2.0; });
    REQUIRE(it != r.records.end());
    CHECK(std::fabs(it->max_ratio - 1.0) <= 1e-9);
    CHECK(it->max_ratio >= it->mean_ratio);
    CHECK(it->trial_count == 4);
  }
  SUBCASE("csv shape") {
    const RatioReport r = run_experiment(cfg);
    const std::string csv = report_to_csv(r);
    CHECK(csv.rfind("trial,p,ratio,n_rects,seed\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 4 * 2);
  }
  SUBCASE("config validation") {
    ExperimentConfig bad = cfg;
    bad.p_list = {0.9};
    CHECK_THROWS_AS(run_experiment(bad), std::invalid_argument);
    bad = cfg;
    bad.trials = 0;
    CHECK_THROWS_AS(run_experiment(bad), std::invalid_argument);
    bad = cfg;
    bad.p_list = {2.5};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }
}

TEST_CASE("verify_identities") {
  ExperimentConfig cfg;
  cfg.m = 4;
  cfg.trials = 6;
  cfg.seed = 7;

  SUBCASE("default run passes every check") {
    const IdentitySuiteReport r = verify_identities(cfg);
    CHECK(r.checks.size() == 7);
    for (const CheckResult& c : r.checks) {
      CAPTURE(c.name);
      CHECK(c.pass);
    }
    CHECK(r.all_pass());
  }
  SUBCASE("fault injection breaks the shift-identity check") {
    cfg.inject_fault = true;
    const IdentitySuiteReport r = verify_identities(cfg);
    bool shift_failed = false;
    for (const CheckResult& c : r.checks)
      if (c.name == "spectral_shift_identities") shift_failed = !c.pass;
    CHECK(shift_failed);
    CHECK_FALSE(r.all_pass());
  }
}

TEST_CASE("calibrated thresholds are available for the acceptance exponents") {
  for (double p : {1.1, 1.25, 1.5}) CHECK(ratio_threshold_for(p) > 1.0);
  CHECK_THROWS_AS(ratio_threshold_for(1.7), std::invalid_argument);
}
