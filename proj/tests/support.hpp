#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "greenline/lift.hpp"
#include "greenline/poly.hpp"
#include "greenline/valued_field.hpp"

namespace testing {

using greenline::Complex;
using greenline::Integer;
using greenline::Poly;
using greenline::Rational;

// Exponent of p in n by repeated division.
inline long trial_valuation(Integer n, unsigned long p) {
  if (n < 0) n = -n;
  long v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

inline long trial_valuation(const Rational& x, unsigned long p) {
  return trial_valuation(Integer(x.get_num()), p) - trial_valuation(Integer(x.get_den()), p);
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen); }
  double real(double lo, double hi) { return lo + (hi - lo) * (static_cast<double>(gen() >> 11) * 0x1.0p-53); }
  Complex complex(double r) { return {real(-r, r), real(-r, r)}; }

  // Nonzero rational with p-heavy numerators and denominators.
  Rational rational(unsigned long p, int spread = 3) {
    Integer num = integer(1, 40) * (integer(0, 1) ? 1 : -1);
    Integer den = integer(1, 40);
    const long e = integer(-spread, spread);
    Integer pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), p, static_cast<unsigned long>(std::labs(e)));
    if (e > 0) num *= pe;
    if (e < 0) den *= pe;
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  Rational maybe_zero_rational(unsigned long p) { return integer(0, 4) == 0 ? Rational(0) : rational(p); }

  Poly<Rational> poly_from_roots(const std::vector<Rational>& roots, const Rational& lead) {
    Poly<Rational> out = Poly<Rational>::constant(lead);
    for (const auto& r : roots) out = out * Poly<Rational>{Rational(-r), Rational(1)};
    return out;
  }

  Poly<Rational> rational_poly(unsigned long p, int degree) {
    std::vector<Rational> c;
    for (int k = 0; k < degree; ++k) c.push_back(maybe_zero_rational(p));
    c.push_back(rational(p));
    return Poly<Rational>(c);
  }

  Poly<Complex> complex_poly(int degree, double r = 1.0) {
    std::vector<Complex> c;
    for (int k = 0; k <= degree; ++k) c.push_back(complex(r));
    return Poly<Complex>(c);
  }
};

}  // namespace testing
