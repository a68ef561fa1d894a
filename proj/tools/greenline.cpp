#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "greenline/experiments.hpp"
#include "greenline/map_parser.hpp"

using namespace greenline;

namespace {

void emit(const std::string& text, const std::string& out, bool binary = false) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, binary ? std::ios::binary : std::ios::out);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << text;
}

void emit_report(const Report& r, const std::string& out) { emit(r.dump(2) + "\n", out); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"greenline: Green functions, equilibrium measures and Berkovich dynamics"};
  app.require_subcommand(1);
  std::string out;
  app.add_option("--out,-o", out, "write output here instead of stdout");

  std::string map;

  auto* res = app.add_subcommand("resultant", "homogeneous resultant of the lift of a map");
  unsigned long res_p = 0;
  res->add_option("map", map, "map, e.g. \"z^2 + 1/3\"")->required();
  res->add_option("-p,--prime", res_p, "also report the p-adic absolute value");

  auto* green = app.add_subcommand("green", "sample g_f on a grid (CSV, optional PGM)");
  std::vector<double> window{-2, 2, -2, 2};
  int resolution = 64;
  std::string pgm;
  bool serial = false;
  green->add_option("map", map)->required();
  green->add_option("--grid", window, "x0 x1 y0 y1")->expected(4);
  green->add_option("--res", resolution, "samples per side")->check(CLI::PositiveNumber);
  green->add_option("--pgm", pgm, "also write a PGM image");
  green->add_flag("--serial", serial, "use the serial kernel");

  auto* meas = app.add_subcommand("measure", "preimage measure of a map");
  PreimageOptions popt;
  meas->add_option("map", map)->required();
  meas->add_option("--depth", popt.depth)->check(CLI::PositiveNumber);
  meas->add_option("--max-atoms", popt.max_atoms);
  meas->add_option("--budget", popt.budget);
  meas->add_option("--seed", popt.seed);
  meas->add_flag("--serial", serial);

  auto* berk = app.add_subcommand("berk", "Berkovich line over C_p");
  berk->require_subcommand(1);
  unsigned long prime = 0;
  std::string point;
  auto* image = berk->add_subcommand("image", "image of a point and its local degree");
  image->add_option("map", map)->required();
  image->add_option("point", point, "inf, gauss, a rational, or zeta(a, r)")->required();
  image->add_option("-p,--prime", prime)->required();
  int search_depth = 10;
  auto* reduce = berk->add_subcommand("reduce", "search for potentially good reduction");
  reduce->add_option("map", map)->required();
  reduce->add_option("-p,--prime", prime)->required();
  reduce->add_option("--depth", search_depth)->check(CLI::NonNegativeNumber);

  auto* charz = app.add_subcommand("characterize", "run an experiment described by a config file");
  std::string config;
  charz->add_option("config", config)->required()->check(CLI::ExistingFile);

  auto* cex = app.add_subcommand("counterexample", "conjugate z^d + c by 1/(z - z0) and check it exactly");
  int degree = 2;
  std::string c_text, z0_text;
  cex->add_option("-p,--prime", prime)->required();
  cex->add_option("-d,--degree", degree)->required();
  cex->add_option("-c", c_text)->required();
  cex->add_option("--z0", z0_text)->required();
  cex->add_option("--depth", search_depth)->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*res) {
      emit_report(resultant_report(map, res_p), out);
    } else if (*green) {
      const auto parsed = parse_map(map);
      const auto gmap = make_rational_map(ComplexField{}, parsed.complex_lift());
      const GreenEvaluator g = GreenEvaluator::of_map(gmap);
      const Window w{window[0], window[1], window[2], window[3]};
      const GreenGrid grid = emit_green_grid(g, w, resolution, !serial);
      emit(grid.csv(), out);
      if (!pgm.empty()) emit(grid.pgm(), pgm, true);
    } else if (*meas) {
      popt.parallel = !serial;
      emit_report(measure_report(map, popt), out);
    } else if (*image) {
      emit_report(berk_image_report(map, point, prime), out);
    } else if (*reduce) {
      emit_report(berk_reduce_report(map, prime, search_depth), out);
    } else if (*charz) {
      emit_report(run_characterize(load_config(config)), out);
    } else if (*cex) {
      const Report r = run_optimal_counterexample(prime, degree, parse_rational(c_text), parse_rational(z0_text),
                                                  search_depth);
      emit_report(r, out);
      return r["all_pass"].get<bool>() ? 0 : 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "greenline: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
