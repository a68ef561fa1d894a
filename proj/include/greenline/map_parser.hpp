#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "greenline/lift.hpp"
#include "greenline/poly.hpp"
#include "greenline/valued_field.hpp"

namespace greenline {

/// Exact element of Q(i); the coefficient type produced by the map parser.
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  GaussianRational(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(int r) : re(r) {}                  // NOLINT(google-explicit-constructor)
  GaussianRational(long r) : re(r) {}                 // NOLINT(google-explicit-constructor)
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_real() const { return sgn(im) == 0; }
  Complex to_complex() const { return {re.get_d(), im.get_d()}; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }
  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator-(const GaussianRational& a) { return {Rational(-a.re), Rational(-a.im)}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {Rational(a.re * b.re - a.im * b.im), Rational(a.re * b.im + a.im * b.re)};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    const Rational n = b.re * b.re + b.im * b.im;
    if (sgn(n) == 0) throw std::domain_error("division by zero in map description");
    return {Rational((a.re * b.re + a.im * b.im) / n), Rational((a.im * b.re - a.re * b.im) / n)};
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reduced fraction numerator / denominator (gcd constant, denominator monic
/// up to the parsed scaling).
struct ParsedMap {
  Poly<GaussianRational> numerator;
  Poly<GaussianRational> denominator;
  std::string text;

  bool is_real() const;
  HomogeneousLift<Complex> complex_lift() const;
  /// Throws ParseError when a coefficient is not rational.
  HomogeneousLift<Rational> rational_lift() const;
};

/// Parses `f = P(z)/Q(z)` style descriptions. See docs/map-format.md.
ParsedMap parse_map(std::string_view text);

/// Parses a rational literal: `3`, `-2/7`, `0.125`.
Rational parse_rational(std::string_view text);

std::string format_rational(const Rational& x);
std::string format_poly(const Poly<Rational>& p);
std::string format_lift(const HomogeneousLift<Rational>& f);

}  // namespace greenline
