#include <doctest.h>

#include <cmath>

#include "greenline/experiments.hpp"
#include "greenline/map_parser.hpp"

using namespace greenline;

namespace {

double closed_form_z2(Complex z) {
  const double r = std::abs(z);
  return std::max(0.0, std::log(r)) - 0.5 * std::log1p(r * r);
}

GreenEvaluator green_of(const std::string& text) {
  return GreenEvaluator::of_map(make_rational_map(ComplexField{}, parse_map(text).complex_lift()));
}

const CounterexampleCheck& check_named(const CounterexampleRun& run, const std::string& name) {
  for (const auto& c : run.checks)
    if (c.name == name) return c;
  throw std::runtime_error("no check " + name);
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse_config(R"(# comment
map = z^2 + 0.1
depth = 9   # trailing comment
max_atoms = 512
seed = 7
tolerance = 1e-2
parallel = false
)");
  CHECK(cfg.map == "z^2 + 0.1");
  CHECK(cfg.depth == 9);
  CHECK(cfg.max_atoms == 512);
  CHECK(cfg.seed == 7);
  CHECK(cfg.tolerance == 1e-2);
  CHECK_FALSE(cfg.parallel);
  CHECK_FALSE(cfg.padic());

  const auto p1 = parse_config("map = 3*z^2\nfield = p-adic\nprime = 3\n");
  CHECK(p1.padic());
  CHECK(p1.prime == 3);
  const auto p2 = parse_config("map = z^2\nfield = p-adic(5)\n");
  CHECK(p2.prime == 5);

  CHECK_THROWS_AS(parse_config("depth = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("map = z^2\ncolour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("map = z^2\ndepth = twelve\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("map = z^2\ndepth = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("map = z^2\nfield = p-adic\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("map = z^2\nfield = p-adic(4)\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("map = z^2\nfield = real\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("map = z^2\nparallel = yes\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("map z^2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("map =\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config"), ConfigError);
}

TEST_CASE("reports are deterministic") {
  const auto cfg = parse_config("map = z^2 + 0.1\ndepth = 8\nseed = 5\n");
  const std::string a = run_characterize(cfg).dump(2);
  const std::string b = run_characterize(cfg).dump(2);
  CHECK(a == b);
  auto serial = cfg;
  serial.parallel = false;
  // the parallel flag is echoed; everything else must agree
  auto ra = run_characterize(cfg), rb = run_characterize(serial);
  ra.erase("config");
  rb.erase("config");
  CHECK(ra.dump() == rb.dump());
  auto other = cfg;
  other.seed = 6;
  CHECK(run_characterize(other).dump(2) != a);
  const auto pcfg = parse_config("map = z^2 + 1/3\nfield = p-adic(3)\n");
  CHECK(run_characterize(pcfg).dump(2) == run_characterize(pcfg).dump(2));
}

TEST_CASE("green grid of z^2 matches the closed form") {
  const auto g = green_of("z^2");
  const auto grid = emit_green_grid(g, Window{}, 64);
  REQUIRE(grid.values.size() == 64 * 64);
  double worst = 0.0;
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) worst = std::max(worst, std::abs(grid.at(i, j) - closed_form_z2(grid.point(i, j))));
  CHECK(worst < 1e-6);
  const auto serial = emit_green_grid(g, Window{}, 64, false);
  CHECK(serial.values == grid.values);
  CHECK(grid.point(0, 0) == Complex(-2, -2));
  CHECK(grid.point(63, 63) == Complex(2, 2));

  const auto one = emit_green_grid(g, Window{0.5, 1.5, -1.0, 3.0}, 1);
  REQUIRE(one.values.size() == 1);
  CHECK(one.point(0, 0) == Complex(0.5, -1.0));
  CHECK(one.at(0, 0) == doctest::Approx(closed_form_z2({0.5, -1.0})).epsilon(1e-9));

  CHECK_THROWS(emit_green_grid(g, Window{1, 1, -2, 2}, 8));
  CHECK_THROWS(emit_green_grid(g, Window{-2, 2, 3, 3}, 8));
  CHECK_THROWS(emit_green_grid(g, Window{}, 0));

  const auto small = emit_green_grid(g, Window{}, 4);
  const std::string csv = small.csv();
  CHECK(csv.rfind("# window", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2 + 16);
  const std::string pgm = small.pgm();
  CHECK(pgm.rfind("P5\n4 4\n255\n", 0) == 0);
  CHECK(pgm.size() == std::string("P5\n4 4\n255\n").size() + 16);
}

TEST_CASE("counterexample harness") {
  const Rational c = ratio(1, 3);
  // |z0| = 3^5 puts z0 near infinity: all four checks pass
  auto run = optimal_counterexample(3, 2, c, ratio(1, 243));
  CHECK(run.preconditions_ok);
  CHECK(run.checks.size() == 4);
  for (const auto& ch : run.checks) {
    CAPTURE(ch.name);
    CAPTURE(ch.detail);
    CHECK(ch.pass);
  }
  CHECK(run.all_pass());
  CHECK(run.reduction.status == ReductionStatus::none_found);

  // z0 = 243 has |z0| = 3^-5, near 0, and the perturbation inequality fails
  run = optimal_counterexample(3, 2, c, Rational(243));
  CHECK(run.preconditions_ok);
  CHECK_FALSE(check_named(run, "pole-perturbation").pass);
  CHECK(check_named(run, "no-potentially-good-reduction").pass);
  CHECK(check_named(run, "infinity-not-fixed").pass);
  CHECK(check_named(run, "z0-not-fixed").pass);
  CHECK_FALSE(run.all_pass());

  run = optimal_counterexample(3, 2, c, Rational(0));
  CHECK_FALSE(check_named(run, "pole-perturbation").pass);
  CHECK_FALSE(run.all_pass());

  run = optimal_counterexample(3, 2, Rational(0), ratio(1, 243));
  CHECK_FALSE(run.preconditions_ok);
  CHECK_FALSE(run.precondition_failures.empty());
  CHECK_FALSE(run.all_pass());

  run = optimal_counterexample(3, 2, Rational(3), ratio(1, 243));
  CHECK_FALSE(run.preconditions_ok);
  run = optimal_counterexample(4, 2, c, ratio(1, 243));
  CHECK_FALSE(run.preconditions_ok);
  CHECK(run.checks.empty());

  const auto rep = run_optimal_counterexample(3, 2, c, ratio(1, 243));
  CHECK(rep["all_pass"].get<bool>());
  CHECK(rep["checks"].size() == 4);
}

TEST_CASE("p-adic verdicts") {
  auto r = run_characterize(parse_config("map = 3*z^2\nfield = p-adic(3)\n"));
  CHECK(r["verdict"] == "potentially-good-reduction");
  CHECK(r["reduction"]["witness"] == "zeta(0, 3^1)");
  CHECK(r["reduction"]["conjugate"] == "(z^2)/(1)");
  CHECK(r["equilibrium"]["verified"].get<bool>());
  for (const auto& res : r["residuals"])
    if (res["applies"].get<bool>()) CHECK(res["pass"].get<bool>());

  r = run_characterize(parse_config("map = z^2 + 1\nfield = p-adic(3)\n"));
  CHECK(r["verdict"] == "potentially-good-reduction");
  CHECK(r["reduction"]["status"] == "good");

  r = run_characterize(parse_config("map = z^2 + 1/3\nfield = p-adic(3)\n"));
  CHECK(r["verdict"] == "polynomial-consistent");
  CHECK(r["reduction"]["status"] == "none-found");
  CHECK(r["reduction"]["certificate"]["radius_nondecreasing"].get<bool>());
}

TEST_CASE("complex verdicts") {
  auto cfg = parse_config("map = z^2 + 0.1\ndepth = 12\n");
  const auto poly = characterize_complex(cfg);
  CHECK(poly.verdict == Verdict::polynomial_consistent);
  CHECK(poly.measure.size() >= 4096);
  for (const auto& res : poly.residuals) {
    CAPTURE(res.name);
    CAPTURE(res.value);
    if (res.applies) CHECK(res.pass());
  }
  cfg = parse_config("map = z + 1/z\ndepth = 12\n");
  const auto bad = characterize_complex(cfg);
  CHECK(bad.verdict == Verdict::characterization_violated);
  CHECK(bad.sup_margin > 10 * poly.sup_margin);
}

TEST_CASE("report builders") {
  auto r = resultant_report("z^2 + 1/3", 3);
  CHECK(r["schema"] == report_schema);
  CHECK(r.contains("resultant"));
  PreimageOptions opt;
  opt.depth = 4;
  r = measure_report("z^2", opt);
  CHECK(r["atoms"].size() == 16);
  r = berk_image_report("z^2", "gauss", 3);
  CHECK(r["image"] == "zeta(0, 1)");
  CHECK(r["local_degree"] == 2);
  r = berk_reduce_report("3*z^2", 3, 10);
  CHECK(r["reduction"]["status"] == "potentially-good");
  CHECK_THROWS(berk_image_report("z^2", "zeta(0, 2)", 3));
}
