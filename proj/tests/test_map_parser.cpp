#include <doctest.h>

#include "greenline/berk_dynamics.hpp"
#include "greenline/map_parser.hpp"
#include "support.hpp"

using namespace greenline;

namespace {

Rational eval(const RationalLift& f, const Rational& z) {
  const auto w = f.apply(P1Point<Rational>::at(z));
  REQUIRE_FALSE(w.infinite);
  return w.value;
}

}  // namespace

TEST_CASE("parse_rational") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-2/7") == Rational(-2, 7));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational(" 243 ") == 243);
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
}

TEST_CASE("maps evaluate like their text") {
  struct Case {
    const char* text;
    Rational (*fn)(const Rational&);
  };
  const Case cases[] = {
      {"z^2 + 1/3", [](const Rational& z) { return Rational(z * z + Rational(1, 3)); }},
      {"f = (z^3 + 1)/z", [](const Rational& z) { return Rational((z * z * z + 1) / z); }},
      {"z + 1/z", [](const Rational& z) { return Rational(z + 1 / z); }},
      {"3z^2 - 0.5 z", [](const Rational& z) { return Rational(3 * z * z - z / 2); }},
      {"(2*z+1)/(z-4)", [](const Rational& z) { return Rational((2 * z + 1) / (z - 4)); }},
      {"(z-1)^2 (z+2)", [](const Rational& z) { return Rational((z - 1) * (z - 1) * (z + 2)); }},
      {"-z^2", [](const Rational& z) { return Rational(-z * z); }},
  };
  for (const auto& c : cases) {
    const RationalLift f = parse_map(c.text).rational_lift();
    for (int k = 1; k <= 6; ++k) {
      const Rational z = ratio(k, 3);
      CHECK(eval(f, z) == c.fn(z));
    }
  }
}

TEST_CASE("common factors cancel and degrees follow") {
  const RationalLift f = parse_map("(z^2 - 1)/(z - 1)").rational_lift();
  CHECK(f.degree() == 1);
  const RationalLift g = parse_map("z^2 + 1/z").rational_lift();
  CHECK(g.degree() == 3);
  CHECK(g.d0() == 1);
  CHECK(g.fixes_infinity());
  CHECK_FALSE(g.is_polynomial());
  CHECK(parse_map("z^3 - 0.5*z").rational_lift().is_polynomial());
}

TEST_CASE("complex coefficients") {
  const auto p = parse_map("z^2 + i");
  CHECK_FALSE(p.is_real());
  CHECK_THROWS_AS(p.rational_lift(), ParseError);
  const auto f = p.complex_lift();
  const auto w = f.apply(P1Point<Complex>::at({1.0, 1.0}));
  CHECK(w.value.real() == doctest::Approx(0.0));
  CHECK(w.value.imag() == doctest::Approx(3.0));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_map(""), ParseError);
  CHECK_THROWS_AS(parse_map("z^"), ParseError);
  CHECK_THROWS_AS(parse_map("(z + 1"), ParseError);
  CHECK_THROWS_AS(parse_map("z / 0"), std::exception);
  CHECK_THROWS_AS(parse_map("z^-1"), ParseError);
  CHECK_THROWS_AS(parse_map("z - z"), ParseError);
  CHECK_THROWS_AS(parse_map("w^2"), ParseError);
}

TEST_CASE("formatting round trips") {
  const RationalLift f = parse_map("3*z^2 - z + 1/3").rational_lift();
  const auto again = parse_map(format_lift(f)).rational_lift();
  for (int k = -3; k <= 3; ++k) CHECK(eval(f, Rational(k)) == eval(again, Rational(k)));
  CHECK(format_poly(Poly<Rational>{Rational(1, 3), -1, 3}) == "3*z^2 - z + 1/3");
  CHECK(format_rational(Rational(-4, 6)) == "-2/3");
}
