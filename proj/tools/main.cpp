#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "walshlp/decomp.hpp"
#include "walshlp/harness.hpp"
#include "walshlp/martingale.hpp"
#include "walshlp/walsh.hpp"

namespace {

using nlohmann::json;
using namespace walshlp;

// Output paths only may be redirected through the environment.
std::string resolve_out(const std::string& path) {
  if (path.empty()) return path;
  const char* dir = std::getenv("WALSHLP_OUT_DIR");
  if (!dir || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(dir) / path).string();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  json j;
  in >> j;
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::string resolved = resolve_out(path);
  std::ofstream out(resolved);
  if (!out) throw std::runtime_error("cannot open output file: " + resolved);
  out << text;
}

GridFunction grid_from_json(const json& j) {
  const int m = j.at("m").get<int>();
  const Resolution res(m);
  std::vector<double> values;
  values.reserve(std::size_t{res.cells()} * res.cells());
  for (const auto& row : j.at("values"))
    for (const auto& v : row) values.push_back(v.get<double>());
  return GridFunction(res, std::move(values));
}

json grid_to_json(const GridFunction& f, const char* key = "values") {
  json rows = json::array();
  for (std::uint32_t j1 = 0; j1 < f.cells(); ++j1) {
    json row = json::array();
    for (std::uint32_t j2 = 0; j2 < f.cells(); ++j2) row.push_back(f.at(j1, j2));
    rows.push_back(std::move(row));
  }
  return {{"m", f.resolution().m()}, {key, rows}};
}

int cmd_transform(const std::string& in_path, const std::string& out_path,
                  bool inverse) {
  const json in = read_json_file(in_path);
  json out;
  if (inverse) {
    const int m = in.at("m").get<int>();
    const Resolution res(m);
    std::vector<double> coeffs;
    for (const auto& row : in.at("coeffs"))
      for (const auto& v : row) coeffs.push_back(v.get<double>());
    const GridFunction f = walsh_inverse_2d(CoeffMatrix(res, std::move(coeffs)));
    out = grid_to_json(f);
  } else {
    const CoeffMatrix c = walsh_transform_2d(grid_from_json(in));
    json rows = json::array();
    for (std::uint32_t n1 = 0; n1 < c.cells(); ++n1) {
      json row = json::array();
      for (std::uint32_t n2 = 0; n2 < c.cells(); ++n2) row.push_back(c.at(n1, n2));
      rows.push_back(std::move(row));
    }
    out = {{"m", c.resolution().m()}, {"coeffs", rows}};
  }
  write_text_file(out_path, out.dump(2) + "\n");
  return 0;
}

void print_decomposition_1d(const BlockDecomposition1D& dec) {
  std::cout << "singleton: {" << dec.singleton << "}\n";
  for (const Block1D& b : dec.rising)
    std::cout << "rising  kappa=" << b.exponent << "  [" << b.block.a << ", "
              << b.block.b - 1 << "]\n";
  for (const Block1D& b : dec.falling)
    std::cout << "falling gamma=" << b.exponent << "  [" << b.block.a << ", "
              << b.block.b - 1 << "]\n";
}

int cmd_decompose(std::uint32_t a, std::uint32_t b,
                  const std::vector<std::uint32_t>& rect, bool as_json) {
  if (!rect.empty()) {
    if (rect.size() != 4)
      throw CLI::ValidationError("--rect expects a1,b1,a2,b2");
    const SpectralRectangle r{make_interval(rect[0], rect[1]),
                              make_interval(rect[2], rect[3])};
    const RectangleDecomposition dec = decompose_rectangle(r);
    const VerificationResult check = verify_decomposition(r, dec);
    if (!check.ok) {
      for (const std::string& s : check.issues) std::cerr << s << "\n";
      return 1;
    }
    if (as_json) {
      std::cout << to_json(dec).dump(2) << "\n";
    } else {
      std::cout << "rectangle [" << r.i1.a << ", " << r.i1.b - 1 << "] x ["
                << r.i2.a << ", " << r.i2.b - 1 << "], "
                << dec.blocks.size() << " blocks\n";
      for (const MappedBlock& mb : dec.blocks)
        std::cout << to_string(mb.cls) << "  [" << mb.b1.a << ", "
                  << mb.b1.b - 1 << "] x [" << mb.b2.a << ", " << mb.b2.b - 1
                  << "]  vertex (" << mb.vertex.n1 << "," << mb.vertex.n2
                  << ")  k=(" << mb.diff_index.n1 << "," << mb.diff_index.n2
                  << ")\n";
    }
    return 0;
  }
  const BlockDecomposition1D dec = decompose_interval(make_interval(a, b));
  if (as_json) {
    json rising = json::array(), falling = json::array();
    for (const Block1D& blk : dec.rising)
      rising.push_back({{"kappa", blk.exponent},
                        {"a", blk.block.a},
                        {"b_minus_1", blk.block.b - 1}});
    for (const Block1D& blk : dec.falling)
      falling.push_back({{"gamma", blk.exponent},
                         {"a", blk.block.a},
                         {"b_minus_1", blk.block.b - 1}});
    std::cout << json{{"singleton", dec.singleton},
                      {"rising", rising},
                      {"falling", falling}}
                     .dump(2)
              << "\n";
  } else {
    print_decomposition_1d(dec);
  }
  return 0;
}

int cmd_verify(ExperimentConfig cfg) {
  const IdentitySuiteReport report = verify_identities(cfg);
  for (const CheckResult& c : report.checks)
    std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name
              << "  worst=" << c.worst << "  tol=" << c.tolerance
              << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
  return report.all_pass() ? 0 : 1;
}

int cmd_lprf_run(ExperimentConfig cfg) {
  const RatioReport report = run_experiment(cfg);
  for (const PerPRecord& r : report.records)
    std::cout << "p=" << r.p << "  max_ratio=" << r.max_ratio
              << "  mean_ratio=" << r.mean_ratio << "  trials=" << r.trial_count
              << "\n";
  if (!cfg.out_json.empty())
    write_text_file(cfg.out_json, report_to_json(report).dump(2) + "\n");
  if (!cfg.out_csv.empty()) write_text_file(cfg.out_csv, report_to_csv(report));
  return 0;
}

int cmd_atom_test(int m, int scale, double p, std::uint64_t seed, int trials,
                  const std::string& out_path) {
  const Resolution res(m);
  json atoms = json::array();
  bool all_ok = true;
  for (int t = 0; t < trials; ++t) {
    const std::uint32_t positions = 1u << scale;
    const DyadicSpatialRect F =
        make_dyadic_rect(scale, scale, t % positions, (t / positions) % positions);
    const RectangleAtomSpec atom = make_rectangle_atom(F, p, seed + t, res);
    const bool valid =
        atom.degenerate || is_rectangle_atom(atom.values, F, p, 1e-12);
    all_ok = all_ok && valid;
    std::cout << (valid ? "PASS" : "FAIL") << "  atom " << t << "  F=2^-"
              << scale << " x 2^-" << scale << " at (" << F.k1 << "," << F.k2
              << ")" << (atom.degenerate ? "  [degenerate: zero atom]" : "")
              << "\n";
    if (!out_path.empty())
      atoms.push_back({{"support",
                        {{"n1", F.n1}, {"n2", F.n2}, {"k1", F.k1}, {"k2", F.k2}}},
                       {"p", p},
                       {"degenerate", atom.degenerate},
                       {"valid", valid},
                       {"grid", grid_to_json(atom.values)}});
  }
  if (!out_path.empty())
    write_text_file(out_path, json{{"schema_version", 1}, {"atoms", atoms}}.dump(2) + "\n");
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-parameter Walsh spectral toolkit"};
  app.require_subcommand(1);

  std::string in_path, out_path;
  bool inverse = false;
  auto* transform = app.add_subcommand(
      "transform", "2D Walsh transform of a grid-function file");
  transform->add_option("--in", in_path, "input JSON file")->required();
  transform->add_option("--out", out_path, "output JSON file")->required();
  transform->add_flag("--inverse", inverse, "synthesize values from coeffs");

  std::uint32_t a = 0, b = 0;
  std::vector<std::uint32_t> rect;
  bool as_json = false;
  auto* decompose = app.add_subcommand(
      "decompose", "xor-shiftable decomposition of [a,b) or a rectangle");
  decompose->add_option("--a", a, "interval left endpoint (inclusive)");
  decompose->add_option("--b", b, "interval right endpoint (exclusive)");
  decompose->add_option("--rect", rect,
                        "a1,b1,a2,b2 (b exclusive) for a 2D rectangle")
      ->delimiter(',');
  decompose->add_flag("--json", as_json, "emit JSON");

  ExperimentConfig cfg;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--m", cfg.m, "grid resolution exponent");
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--trials", cfg.trials, "number of trials");
  };
  auto* verify = app.add_subcommand("verify-identities",
                                    "run the identity verification suite");
  add_common(verify);
  verify->add_flag("--inject-fault", cfg.inject_fault,
                   "corrupt one decomposition (the shift-identity check must "
                   "then fail)");

  auto* lprf = app.add_subcommand("lprf-run",
                                  "Monte-Carlo ratio estimation across p");
  add_common(lprf);
  lprf->add_option("--p-list", cfg.p_list, "exponents in (1,2]")->delimiter(',');
  std::string partition = "guillotine";
  lprf->add_option("--partition", partition,
                   "guillotine | row-bands | from-file");
  lprf->add_option("--partition-file", cfg.partition_file,
                   "JSON rectangle list for --partition from-file");
  lprf->add_option("--min-block", cfg.min_block, "minimum rectangle side");
  std::string dist = "gaussian";
  lprf->add_option("--dist", dist, "gaussian | rademacher");
  lprf->add_option("--out", cfg.out_json, "JSON report path");
  lprf->add_option("--csv", cfg.out_csv, "CSV report path");

  int scale = 2;
  double atom_p = 1.0;
  std::string atom_out;
  auto* atom = app.add_subcommand("atom-test",
                                  "generate and validate rectangle atoms");
  add_common(atom);
  atom->add_option("--scale", scale, "dyadic support scale per axis");
  atom->add_option("--p", atom_p, "atom exponent in (0,1]");
  atom->add_option("--out", atom_out, "JSON dump of atoms with metadata");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*transform) return cmd_transform(in_path, out_path, inverse);
    if (*decompose) return cmd_decompose(a, b, rect, as_json);
    if (*verify) return cmd_verify(cfg);
    if (*lprf) {
      if (partition == "guillotine")
        cfg.partition_kind = PartitionKind::Guillotine;
      else if (partition == "row-bands")
        cfg.partition_kind = PartitionKind::RowBands;
      else if (partition == "from-file")
        cfg.partition_kind = PartitionKind::FromFile;
      else
        throw CLI::ValidationError("unknown partition kind: " + partition);
      if (dist == "gaussian")
        cfg.coefficient_dist = CoefficientDist::Gaussian;
      else if (dist == "rademacher")
        cfg.coefficient_dist = CoefficientDist::Rademacher;
      else
        throw CLI::ValidationError("unknown distribution: " + dist);
      return cmd_lprf_run(cfg);
    }
    if (*atom) return cmd_atom_test(cfg.m, scale, atom_p, cfg.seed, cfg.trials,
                                    atom_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
