#include <doctest.h>

#include <cmath>
#include <numbers>

#include "greenline/archimedean.hpp"
#include "greenline/map_parser.hpp"
#include "greenline/potential.hpp"
#include "support.hpp"

using namespace greenline;
using testing::Rng;

namespace {

ClassicalPoint at(Complex z) { return ClassicalPoint::at(z); }
const ClassicalPoint inf = ClassicalPoint::infinity();

ComplexMap map_of(const std::string& text) { return make_rational_map(ComplexField{}, parse_map(text).complex_lift()); }

ClassicalMeasure roots_of_unity(int n) {
  ClassicalMeasure mu;
  for (int j = 0; j < n; ++j) mu.add(at(std::polar(1.0, 2 * std::numbers::pi * j / n)), 1.0 / n);
  return mu;
}

double brute_energy(const ClassicalMeasure& mu) {
  double s = 0.0, w = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < mu.size(); ++j) {
      if (i == j) continue;
      s += mu.atoms[i].mass * mu.atoms[j].mass * std::log(std::abs(mu.atoms[i].point.value - mu.atoms[j].point.value));
      w += mu.atoms[i].mass * mu.atoms[j].mass;
    }
  return s / w;
}

DiscreteMeasure<BerkPoint> dirac(const BerkPoint& s) {
  DiscreteMeasure<BerkPoint> m;
  m.add(s, 1.0);
  return m;
}

}  // namespace

TEST_CASE("classical potential examples") {
  const auto mu = roots_of_unity(8);
  const auto p = potential(mu, inf, at(2.0));
  CHECK(p.value == doctest::Approx(std::log(255.0) / 8).epsilon(1e-14));
  CHECK_FALSE(p.clamped());
  const auto hit = potential(mu, inf, at(1.0));
  CHECK(hit.clamped());
  CHECK(hit.collisions == 1);
  CHECK(hit.value < -1e4);
  // chordal kernel normalized at a finite pole
  const auto q = potential(mu, at(0.0), at(2.0));
  CHECK(std::isfinite(q.value));
}

TEST_CASE("roots of unity energies against brute force") {
  double last = 1.0;
  for (int n : {8, 64, 512}) {
    const auto mu = roots_of_unity(n);
    const auto e = energy(mu, inf);
    CHECK(e.value == doctest::Approx(brute_energy(mu)).epsilon(1e-9));
    CHECK(e.value == doctest::Approx(std::log(n) / (n - 1)).epsilon(1e-9));
    CHECK(e.value < last);
    CHECK_FALSE(e.degenerate);
    last = e.value;
    ClassicalOptions serial;
    serial.parallel = false;
    CHECK(energy(mu, inf, serial).value == doctest::Approx(e.value).epsilon(1e-12));
  }
  CHECK(last < 0.013);
}

TEST_CASE("degenerate and colliding energies") {
  ClassicalMeasure one;
  one.add(at(0.5), 1.0);
  const auto e = energy(one, inf);
  CHECK(e.value == 0.0);
  CHECK(e.degenerate);
  ClassicalMeasure two;
  two.add(at(0.5), 0.5);
  two.add(at(0.5), 0.5);
  const auto c = energy(two, inf);
  CHECK(c.clamped());
  CHECK_FALSE(c.degenerate);
}

TEST_CASE("weighted energy") {
  Rng rng(41);
  ClassicalMeasure mu;
  for (int i = 0; i < 50; ++i) mu.add(at(rng.complex(2.0)), 1.0 / 50);
  const Weight zero = [](const ClassicalPoint&) { return 0.0; };
  // g = 0: the chordal pair energy
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < mu.size(); ++j)
      if (i != j) s += std::log(chordal(ComplexField{}, mu.atoms[i].point, mu.atoms[j].point).value());
  const double chordal_energy = s / (50.0 * 49.0);
  CHECK(weighted_energy(mu, zero).value == doctest::Approx(chordal_energy).epsilon(1e-12));
  const double c = 0.37;
  const Weight shifted = [c](const ClassicalPoint&) { return c; };
  CHECK(weighted_energy(mu, shifted).value == doctest::Approx(chordal_energy - 2 * c).epsilon(1e-12));
  // normalized weight g + V/2 has zero energy
  const double v = weighted_energy(mu, zero).value;
  const Weight normalized = [v](const ClassicalPoint&) { return v / 2; };
  CHECK(std::abs(weighted_energy(mu, normalized).value) < 1e-12);
  // symmetry
  const auto g = GreenEvaluator::of_map(map_of("z^2 + 0.1"));
  const Weight gw = [&g](const ClassicalPoint& z) { return g(z); };
  for (int i = 0; i < 20; ++i) {
    const auto z = at(rng.complex(3.0)), w = at(rng.complex(3.0));
    CHECK(weighted_kernel(gw, z, w) == doctest::Approx(weighted_kernel(gw, w, z)).epsilon(1e-14));
  }
}

TEST_CASE("weighted energy of the z^2 preimage measure vanishes") {
  const auto m = map_of("z^2");
  const auto g = GreenEvaluator::of_map(m);
  PreimageOptions opt;
  opt.depth = 12;
  opt.seed = 1;
  const auto mu = preimage_measure(m.lift, at(0.5), opt);
  const Weight gw = [&g](const ClassicalPoint& z) { return g(z); };
  CHECK(std::abs(weighted_energy(mu, gw).value) < 5e-3);
}

TEST_CASE("infinity kernel identity for a polynomial") {
  const auto m = map_of("z^2 + 0.1");
  const auto g = GreenEvaluator::of_map(m);
  PreimageOptions opt;
  opt.depth = 12;
  opt.seed = 3;
  const auto mu = preimage_measure(m.lift, choose_seed(m.lift), opt);
  const double I = energy(mu, inf).value;
  const Weight gw = [&g](const ClassicalPoint& z) { return g(z); };
  Rng rng(42);
  for (int i = 0; i < 16; ++i) {
    const auto z = at(std::polar(rng.real(1.6, 3.0), rng.real(0, 2 * std::numbers::pi)));
    const double lhs = weighted_kernel(gw, z, inf) + potential(mu, inf, z).value - I;
    CHECK(std::abs(lhs) < 5e-3);
  }
}

TEST_CASE("frostman check for the z^2 measure") {
  const auto m = map_of("z^2");
  PreimageOptions opt;
  opt.depth = 12;
  const auto mu = preimage_measure(m.lift, at(1.0), opt);
  REQUIRE(mu.size() == 4096);
  const auto rep = frostman_check(mu, inf,
                                  {at(std::polar(1.0, std::numbers::pi / 4096)), at(2.0), at(Complex(0, -4.0))});
  REQUIRE(rep.samples.size() == 3);
  CHECK(std::abs(rep.samples[0].margin) < 5e-3);
  CHECK(rep.samples[1].margin == doctest::Approx(std::log(2.0)).epsilon(5e-3));
  CHECK(rep.samples[2].margin == doctest::Approx(std::log(4.0)).epsilon(5e-3));
  CHECK(frostman_check(mu, inf, {}).samples.empty());
}

TEST_CASE("Berkovich potentials and energies") {
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    const PadicField k(p);
    const auto gauss = dirac(BerkPoint::gauss());
    const auto inf_b = BerkPoint::infinity();
    CHECK(potential(k, gauss, inf_b, BerkPoint::classical(0)).log_p == 0);
    CHECK(potential(k, gauss, inf_b, BerkPoint::classical(ratio(1, p))).log_p == 1);
    CHECK(potential(k, gauss, inf_b, BerkPoint::classical(Rational(static_cast<long>(p * p)))).log_p == 0);
    CHECK(potential(k, gauss, inf_b, BerkPoint::classical(ratio(1, p * p))).log_p == 2);
    CHECK(energy(k, gauss, inf_b).log_p == 0);
    CHECK(energy(k, gauss, inf_b).collisions == 0);
    const auto rep = frostman_check(k, gauss,
                                    {BerkPoint::classical(1), BerkPoint::classical(ratio(1, p)),
                                     BerkPoint::classical(ratio(1, p * p))});
    REQUIRE(rep.size() == 3);
    CHECK(rep[0].margin_log_p == 0);
    CHECK(rep[1].margin_log_p == 1);
    CHECK(rep[2].margin_log_p == 2);
    CHECK(frostman_check(k, gauss, {}).empty());
    // a classical atom at the evaluation point is flagged
    const auto hit = potential(k, dirac(BerkPoint::classical(3)), inf_b, BerkPoint::classical(3));
    CHECK(hit.collisions == 1);
  }
}

TEST_CASE("equilibrium of disks") {
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    const PadicField k(p);
    auto eq = equilibrium_of_disks(k, {Disk{0, 1}});
    REQUIRE(eq.measure.size() == 1);
    CHECK(same_point(k, eq.measure.atoms[0].point, BerkPoint::disk(0, 1)));
    CHECK(eq.v_log_p == -1);
    CHECK(eq.v(p) == doctest::Approx(-std::log(double(p))));
    eq = equilibrium_of_disks(k, {Disk{0, 0}});
    CHECK(eq.v_log_p == 0);
    CHECK_THROWS(equilibrium_of_disks(k, {Disk{0, 0}, Disk{1, 1}}));
    CHECK_THROWS(equilibrium_of_disks(k, {}));

    // two disjoint residue disks: equal masses, V = -1/2
    eq = equilibrium_of_disks(k, {Disk{0, 1}, Disk{1, 1}});
    REQUIRE(eq.masses.size() == 2);
    CHECK(eq.masses[0] == ratio(1, 2));
    CHECK(eq.masses[1] == ratio(1, 2));
    CHECK(eq.v_log_p == ratio(-1, 2));
    // equal potentials on the disks, larger off them
    const auto rep = frostman_check(k, eq.measure, {BerkPoint::disk(0, 3), BerkPoint::classical(1), BerkPoint::gauss()});
    CHECK(rep[0].margin_log_p == 0);
    CHECK(rep[1].margin_log_p == 0);
    CHECK(rep[2].margin_log_p == ratio(1, 2));
  }
}

TEST_CASE("affine maps shift V by log|a|") {
  Rng rng(43);
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    const PadicField k(p);
    for (int i = 0; i < 20; ++i) {
      std::vector<Disk> disks;
      const long v = rng.integer(1, 3);
      const int n = static_cast<int>(rng.integer(1, std::min<long>(3, static_cast<long>(p))));
      for (int j = 0; j < n; ++j) disks.push_back(Disk{Rational(j) + Rational(rng.integer(0, 4)) * k.power(v + 1), Rational(v)});
      const Rational a = rng.rational(p), b = rng.maybe_zero_rational(p);
      std::vector<Disk> moved;
      for (const auto& d : disks) moved.push_back(Disk{a * d.center + b, d.v + valuation(a, p)});
      const auto e0 = equilibrium_of_disks(k, disks);
      const auto e1 = equilibrium_of_disks(k, moved);
      CHECK(e1.v_log_p == e0.v_log_p + k.abs(a).log_p());
      REQUIRE(e0.masses.size() == e1.masses.size());
      for (std::size_t j = 0; j < e0.masses.size(); ++j) {
        CHECK(e1.masses[j] == e0.masses[j]);
        const BerkPoint image = BerkPoint::disk(a * e0.measure.atoms[j].point.center() + b,
                                                *e0.measure.atoms[j].point.radius_exponent() + valuation(a, p));
        CHECK(same_point(k, image, e1.measure.atoms[j].point));
      }
    }
  }
}

TEST_CASE("moving the pole far away leaves potentials unchanged") {
  Rng rng(44);
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    const PadicField k(p);
    const auto eq = equilibrium_of_disks(k, {Disk{0, 1}, Disk{1, 2}});
    // [z0, inf] = p^-6 is smaller than [atom, z0] for every atom
    const auto z0 = BerkPoint::classical(ratio(1, static_cast<long>(std::pow(p, 6))));
    for (const auto& a : eq.measure.atoms)
      CHECK(potential(k, eq.measure, z0, a.point).log_p == potential(k, eq.measure, BerkPoint::infinity(), a.point).log_p);
    CHECK(energy(k, eq.measure, z0).log_p == energy(k, eq.measure, BerkPoint::infinity()).log_p);
    for (int i = 0; i < 10; ++i) {
      const auto s = BerkPoint::disk(rng.maybe_zero_rational(p), Rational(rng.integer(0, 4)));
      CHECK(potential(k, eq.measure, z0, s).log_p == potential(k, eq.measure, BerkPoint::infinity(), s).log_p);
    }
  }
}
