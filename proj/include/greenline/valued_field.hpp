#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace greenline {

using Rational = mpq_class;
using Integer = mpz_class;
using Complex = std::complex<double>;

/// a / b in lowest terms; mpq_class(a, b) leaves the fraction as given.
template <class A, class B>
Rational ratio(const A& a, const B& b) {
  Rational r{Integer(a), Integer(b)};
  r.canonicalize();
  return r;
}

/// Absolute value of a field element or a disk radius.
///
/// Archimedean values are nonnegative doubles. Non-archimedean values are
/// exact powers p^(-v) carried as the rational exponent v; zero is a flag.
class Absolute {
 public:
  enum class Kind { archimedean, non_archimedean };

  Absolute() = default;

  static Absolute real(double value);
  static Absolute power(unsigned long prime, Rational exponent);
  static Absolute zero(unsigned long prime);
  static Absolute one(unsigned long prime) { return power(prime, 0); }

  Kind kind() const { return kind_; }
  bool archimedean() const { return kind_ == Kind::archimedean; }
  unsigned long prime() const { return prime_; }
  bool is_zero() const { return zero_; }

  /// v in p^(-v). Throws for zero or archimedean values.
  const Rational& exponent() const;
  /// log|x| in units of log p (= -v). Throws for zero or archimedean values.
  Rational log_p() const;

  double value() const;
  /// Natural log; -infinity for zero.
  double log() const;

  std::string to_string() const;

  friend Absolute operator*(const Absolute& a, const Absolute& b);
  friend Absolute operator/(const Absolute& a, const Absolute& b);
  friend bool operator==(const Absolute& a, const Absolute& b);
  friend bool operator<(const Absolute& a, const Absolute& b);
  friend bool operator!=(const Absolute& a, const Absolute& b) { return !(a == b); }
  friend bool operator>(const Absolute& a, const Absolute& b) { return b < a; }
  friend bool operator<=(const Absolute& a, const Absolute& b) { return !(b < a); }
  friend bool operator>=(const Absolute& a, const Absolute& b) { return !(a < b); }

 private:
  Kind kind_ = Kind::archimedean;
  unsigned long prime_ = 0;
  bool zero_ = true;
  double real_ = 0.0;
  Rational exponent_;
};

Absolute max(const Absolute& a, const Absolute& b);
Absolute min(const Absolute& a, const Absolute& b);

/// p-adic valuation of a nonzero integer.
long valuation(const Integer& n, unsigned long prime);
/// v_p(a/b) = v_p(a) - v_p(b); throws on zero.
long valuation(const Rational& x, unsigned long prime);

/// Complex numbers with the usual modulus.
struct ComplexField {
  using value_type = Complex;
  static constexpr bool exact = false;

  Absolute abs(const Complex& x) const { return Absolute::real(std::abs(x)); }
  /// Euclidean norm on K^2.
  Absolute norm(const Complex& x0, const Complex& x1) const {
    return Absolute::real(std::hypot(std::abs(x0), std::abs(x1)));
  }
  Absolute one() const { return Absolute::real(1.0); }
  bool is_zero(const Complex& x) const { return x == Complex{}; }
  std::string name() const { return "complex"; }
};

/// The rationals viewed inside Q_p, with exact p-adic absolute value.
struct PadicField {
  using value_type = Rational;
  static constexpr bool exact = true;

  unsigned long p = 2;

  explicit PadicField(unsigned long prime);

  Absolute abs(const Rational& x) const;
  /// Max norm on K^2.
  Absolute norm(const Rational& x0, const Rational& x1) const { return max(abs(x0), abs(x1)); }
  Absolute one() const { return Absolute::one(p); }
  bool is_zero(const Rational& x) const { return sgn(x) == 0; }
  /// The rational p^k.
  Rational power(long k) const;
  std::string name() const { return "p-adic(" + std::to_string(p) + ")"; }
};

bool is_prime(unsigned long n);

/// A classical point of P^1: a field element or infinity.
template <class T>
struct P1Point {
  T value{};
  bool infinite = false;

  static P1Point at(T v) { return P1Point{std::move(v), false}; }
  static P1Point infinity() { return P1Point{T{}, true}; }

  friend bool operator==(const P1Point& a, const P1Point& b) {
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    return a.value == b.value;
  }
};

/// Normalized chordal distance [z,w] = |p ^ q| / (|p| |q|).
template <class Field>
Absolute chordal(const Field& field, const P1Point<typename Field::value_type>& z,
                 const P1Point<typename Field::value_type>& w) {
  using T = typename Field::value_type;
  const T zero{0};
  const T one{1};
  const T z0 = z.infinite ? zero : one;
  const T z1 = z.infinite ? one : z.value;
  const T w0 = w.infinite ? zero : one;
  const T w1 = w.infinite ? one : w.value;
  const T wedge = z0 * w1 - z1 * w0;
  return field.abs(wedge) / (field.norm(z0, z1) * field.norm(w0, w1));
}

}  // namespace greenline
