#include <doctest.h>

#include <algorithm>
#include <numbers>

#include "greenline/archimedean.hpp"
#include "greenline/map_parser.hpp"
#include "greenline/potential.hpp"
#include "support.hpp"

using namespace greenline;
using testing::Rng;
using CPoly = Poly<Complex>;

namespace {

const ComplexLift square(CPoly{1.0}, CPoly{0.0, 0.0, 1.0}, 2);

ComplexMap map_of(const std::string& text) { return make_rational_map(ComplexField{}, parse_map(text).complex_lift()); }

// Green function of z^2 in closed form.
double green_z2(Complex z) { return std::log(std::max(1.0, std::abs(z))) - 0.5 * std::log1p(std::norm(z)); }

ClassicalPoint at(Complex z) { return ClassicalPoint::at(z); }

ComplexLift random_lift(Rng& rng, int d) {
  const int d0 = static_cast<int>(rng.integer(0, d));
  return ComplexLift(rng.complex_poly(d0), rng.complex_poly(d), d);
}

}  // namespace

TEST_CASE("escape rate of z^2") {
  for (int n : {1, 5, 30}) {
    CHECK(escape_rate(square, at(0.0), n) == doctest::Approx(0.0));
    CHECK(escape_rate(square, ClassicalPoint::infinity(), n) == doctest::Approx(0.0));
  }
  CHECK(escape_rate(square, at(2.0), 60) == doctest::Approx(std::log(2.0) - 0.5 * std::log(5.0)).epsilon(1e-12));
  // per-step renormalization keeps huge orbits finite
  CHECK(std::isfinite(escape_rate(square, at(1e6), 200)));
}

TEST_CASE("Green function of z^2 against the closed form") {
  const GreenEvaluator g = GreenEvaluator::of_map(map_of("z^2"));
  CHECK(g.green(ClassicalPoint::infinity()) == doctest::Approx(0.0));
  Rng rng(51);
  for (int i = 0; i < 100; ++i) {
    const Complex z = rng.complex(4);
    CHECK(std::abs(g.green(at(z)) - green_z2(z)) < 1e-10);
  }
  CHECK_THROWS(g.iterations_for(1e-16));
  CHECK(g.iterations_for(1e-12) > 0);
}

TEST_CASE("Green functional equation on random maps") {
  Rng rng(52);
  for (int i = 0; i < 20; ++i) {
    const int d = static_cast<int>(rng.integer(2, 3));
    const auto m = make_rational_map(ComplexField{}, random_lift(rng, d));
    const GreenEvaluator g(m.lift, m.offset);
    for (int j = 0; j < 50; ++j) {
      const auto z = at(rng.complex(3));
      const double r = d * g.green(z) - g.green(m.lift.apply(z)) - lift_log_ratio(m.lift, z);
      CHECK(std::abs(r) < 1e-9);
    }
  }
}

TEST_CASE("scaling a lift by c shifts g_F by log|c| / (d - 1)") {
  // (2, z^2) and (1, z^2/2) both lift z^2/2
  const GreenEvaluator a(ComplexLift(CPoly{2.0}, CPoly{0.0, 0.0, 1.0}, 2));
  const GreenEvaluator b(ComplexLift(CPoly{1.0}, CPoly{0.0, 0.0, 0.5}, 2));
  Rng rng(53);
  for (int i = 0; i < 10; ++i) {
    const auto z = at(rng.complex(4));
    CHECK(a.lift_green(z) - b.lift_green(z) == doctest::Approx(std::log(2.0)).epsilon(1e-10));
  }
  // normalized weights agree
  const auto ma = make_rational_map(ComplexField{}, a.lift());
  const auto mb = make_rational_map(ComplexField{}, b.lift());
  const auto z = at({0.3, 2.0});
  CHECK(GreenEvaluator(ma.lift, ma.offset).green(z) == doctest::Approx(GreenEvaluator(mb.lift, mb.offset).green(z)));
}

TEST_CASE("tail bound controls the truncation error") {
  Rng rng(54);
  for (int i = 0; i < 10; ++i) {
    const auto f = random_lift(rng, 2);
    const GreenEvaluator g(f);
    const auto z = at(rng.complex(2));
    const int n = g.iterations_for(1e-6);
    CHECK(std::abs(g.lift_green(z, 1e-13) - escape_rate(f, z, n)) <= g.tail_bound() / std::pow(2.0, n) + 1e-12);
  }
}

TEST_CASE("preimage measure of z^2 from 1 is the 8th roots of unity") {
  PreimageOptions opt;
  opt.depth = 3;
  const auto mu = preimage_measure(square, at(1.0), opt);
  REQUIRE(mu.size() == 8);
  CHECK(mu.total_mass() == doctest::Approx(1.0));
  for (const auto& a : mu.atoms) {
    CHECK(a.mass == doctest::Approx(0.125));
    CHECK(std::abs(std::pow(a.point.value, 8) - 1.0) < 1e-12);
  }
  // all eight distinct
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 1; j < 8; ++j) CHECK(std::abs(mu.atoms[i].point.value - mu.atoms[j].point.value) > 0.1);
}

TEST_CASE("preimage measure: budget, pruning, determinism") {
  const auto f = map_of("z^3 - 0.5*z").lift;
  PreimageOptions opt;
  opt.depth = 11;
  CHECK_THROWS_AS(preimage_measure(f, at(0.3), opt), BudgetError);

  opt.depth = 9;
  opt.max_atoms = 4096;
  opt.budget = 1e6;
  const auto mu = preimage_measure(f, at(0.3), opt);
  // last 7 levels in full (3^7 = 2187 <= 4096 < 3^8), one starting point
  CHECK(mu.size() == 2187);
  CHECK(mu.total_mass() == doctest::Approx(1.0));

  opt.max_atoms = 8192;
  CHECK(preimage_measure(f, at(0.3), opt).size() == 6561);

  opt.max_atoms = 4096;
  opt.parallel = false;
  const auto serial = preimage_measure(f, at(0.3), opt);
  REQUIRE(serial.size() == mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) CHECK(serial.atoms[i].point.value == mu.atoms[i].point.value);

  opt.seed = 7;
  const auto other = preimage_measure(f, at(0.3), opt);
  CHECK(other.size() == mu.size());
}

TEST_CASE("preimage measures equidistribute: potentials match log+|z| for z^2") {
  PreimageOptions opt;
  opt.depth = 12;
  for (Complex seed : {Complex(1.0, 0.0), Complex(0.3, 0.4)}) {
    const auto mu = preimage_measure(square, at(seed), opt);
    REQUIRE(mu.size() == 4096);
    for (double r : {1.5, 2.0, 4.0}) {
      const auto z = at(std::polar(r, 0.7));
      CHECK(std::abs(potential(mu, ClassicalPoint::infinity(), z).value - std::log(r)) < 5e-3);
    }
  }
}

TEST_CASE("lambda at infinity") {
  CHECK(std::abs(lambda_at_infinity(map_of("z^2").lift)) == doctest::Approx(0.0));
  CHECK(std::abs(lambda_at_infinity(map_of("z + 1/z").lift)) == doctest::Approx(1.0));
  CHECK(std::abs(lambda_at_infinity(map_of("2z + 1/z").lift)) == doctest::Approx(0.5));
  CHECK_THROWS(lambda_at_infinity(map_of("1/z^2").lift));
}

TEST_CASE("weighted kernel satisfies the pullback formula at classical points") {
  // Phi_g(f(z), w) = sum over preimages u of w of Phi_g(z, u)
  Rng rng(55);
  for (int i = 0; i < 10; ++i) {
    const int d = static_cast<int>(rng.integer(2, 3));
    const auto m = make_rational_map(ComplexField{}, random_lift(rng, d));
    const GreenEvaluator g(m.lift, m.offset);
    const Weight weight = [&](const ClassicalPoint& x) { return g.green(x); };
    const auto z = at(rng.complex(2));
    const auto w = at(rng.complex(2));
    double rhs = 0.0;
    for (const auto& u : preimages(m.lift, w)) rhs += weighted_kernel(weight, z, u);
    CHECK(weighted_kernel(weight, m.lift.apply(z), w) == doctest::Approx(rhs).epsilon(1e-6));
  }
}

TEST_CASE("polynomial identities at 4096 atoms") {
  const auto m = map_of("z^2 - 1");
  const ComplexLift& f = m.lift;
  const GreenEvaluator g(f, m.offset);
  PreimageOptions opt;
  opt.depth = 12;
  const auto mu = preimage_measure(f, choose_seed(f), opt);
  const auto inf = ClassicalPoint::infinity();
  const double I = energy(mu, inf).value;
  CHECK(std::abs(I + 2 * g.green(inf)) <= 5e-3);
  CHECK(std::abs(std::log(std::abs(f.c1())) + I / 2) <= 5e-3);
  // fixed-point proximity mean
  double s = 0.0;
  for (const auto& a : mu.atoms) {
    const auto fz = f.apply(a.point);
    const double c = chordal(ComplexField{}, fz, a.point).value();
    if (c < 1e-12) continue;
    s += a.mass * (std::log(c) - g.green(fz) - g.green(a.point));
  }
  CHECK(std::abs(s) <= 5e-3);
  Rng rng(56);
  for (int i = 0; i < 10; ++i) {
    const auto z = at(std::polar(rng.real(2.5, 5.0), rng.real(0, 6.28)));
    const double p = potential(mu, inf, z).value;
    CHECK(std::abs(p - (g.green(z) + 0.5 * std::log1p(std::norm(z.value)) + I / 2)) <= 5e-3);
    const double pf = potential(mu, inf, f.apply(z)).value;
    CHECK(std::abs(2 * p - pf - I / 2 - std::log(std::abs(f.f0()(z.value)))) <= 5e-3);
  }
}

TEST_CASE("fixed points, derivative and seed") {
  const auto f = map_of("z^2 - 2").lift;
  // fixed points 2 and -1, both repelling (|f'| = 4 and 2)
  const auto div = fixed_point_divisor(f, 1, 0);
  CHECK(div.total_mass() == doctest::Approx(3.0));
  CHECK(std::abs(derivative_at(f, 2.0) - Complex(4.0)) < 1e-12);
  const auto s = choose_seed(f);
  CHECK(std::abs(s.value - Complex(2.0)) < 1e-9);
  // z^2: the repelling fixed point is 1
  CHECK(std::abs(choose_seed(square).value - Complex(1.0)) < 1e-9);
  // z + 1/z has no finite fixed point
  const auto t = choose_seed(map_of("z + 1/z").lift);
  CHECK_FALSE(t.infinite);
}

TEST_CASE("heuristic basin of infinity") {
  const auto poly = basin_of_infinity(map_of("z^2 + 0.1").lift);
  CHECK(poly.infinity_in_fatou);
  CHECK(poly.label == "heuristic basin");
  CHECK_FALSE(basin_of_infinity(map_of("z + 1/z").lift).infinity_in_fatou);
  CHECK(basin_of_infinity(map_of("z^2 + 1/z").lift).infinity_in_fatou);
  CHECK(basin_of_infinity(map_of("2z + 1/z").lift).infinity_in_fatou);
  CHECK_FALSE(basin_of_infinity(map_of("z/2 + 1/z").lift).infinity_in_fatou);
}

TEST_CASE("preimages include infinity with multiplicity") {
  // f = (z^2 + 1)/z: f(inf) = inf, so inf is a preimage of inf with local degree 1
  const auto f = map_of("z + 1/z").lift;
  const auto pre = preimages(f, ClassicalPoint::infinity());
  REQUIRE(pre.size() == 2);
  const auto inf_count = std::count_if(pre.begin(), pre.end(), [](const auto& p) { return p.infinite; });
  CHECK(inf_count == 1);
  for (const auto& p : preimages(f, at({1.0, 2.0}))) CHECK(std::abs(f.apply(p).value - Complex(1.0, 2.0)) < 1e-10);
}
