#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "greenline/poly.hpp"
#include "greenline/valued_field.hpp"

namespace greenline {

namespace detail {

inline double pivot_weight(const Complex& x) { return std::abs(x); }
inline double pivot_weight(const Rational& x) { return sgn(x) == 0 ? 0.0 : 1.0; }

/// Determinant by Gaussian elimination with partial pivoting.
template <class T>
T determinant(std::vector<std::vector<T>> m) {
  const std::size_t n = m.size();
  T det{1};
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = pivot_weight(m[col][col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double w = pivot_weight(m[r][col]);
      if (w > best) {
        best = w;
        piv = r;
      }
    }
    if (best == 0.0) return T{0};
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == T{0}) continue;
      const T factor = m[r][col] / m[col][col];
      for (std::size_t k = col; k < n; ++k) m[r][k] -= factor * m[col][k];
    }
  }
  return det;
}

template <class T>
T ipow(T base, long e) {
  T r{1};
  for (long i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace detail

/// Determinant of the Sylvester matrix of (P, Q) at their nominal degrees,
/// P-rows first. With this convention R(z - a, z - b) = a - b.
/// The zero polynomial is taken at nominal degree 0.
template <class T>
T sylvester_resultant(const Poly<T>& p, const Poly<T>& q) {
  if (p.is_zero() && q.is_zero()) throw std::invalid_argument("resultant of two zero polynomials");
  const int m = std::max(p.degree(), 0);
  const int n = std::max(q.degree(), 0);
  const auto size = static_cast<std::size_t>(m + n);
  std::vector<std::vector<T>> s(size, std::vector<T>(size, T{0}));
  for (int row = 0; row < n; ++row)
    for (int k = 0; k <= m; ++k) s[static_cast<std::size_t>(row)][static_cast<std::size_t>(row + k)] = p[m - k];
  for (int row = 0; row < m; ++row)
    for (int k = 0; k <= n; ++k) s[static_cast<std::size_t>(n + row)][static_cast<std::size_t>(row + k)] = q[n - k];
  return detail::determinant(std::move(s));
}

/// A pair of homogeneous forms (F0, F1) of common degree d, stored
/// dehomogenized as F_i(1, z). The induced map is z -> F1(1,z)/F0(1,z).
template <class T>
class HomogeneousLift {
 public:
  HomogeneousLift() = default;
  HomogeneousLift(Poly<T> f0, Poly<T> f1, int degree) : f0_(std::move(f0)), f1_(std::move(f1)), d_(degree) {
    if (d_ < 1) throw std::invalid_argument("lift degree must be >= 1");
    if (f0_.degree() > d_ || f1_.degree() > d_) throw std::invalid_argument("row degree exceeds lift degree");
    if (f0_.is_zero() && f1_.is_zero()) throw std::invalid_argument("lift vanishes identically");
  }
  /// Lift of P/Q with d = max(deg P, deg Q).
  static HomogeneousLift of_fraction(Poly<T> numerator, Poly<T> denominator) {
    const int d = std::max(numerator.degree(), denominator.degree());
    return HomogeneousLift(std::move(denominator), std::move(numerator), d);
  }
  static HomogeneousLift identity() { return HomogeneousLift(Poly<T>::constant(T{1}), Poly<T>::x(), 1); }

  const Poly<T>& f0() const { return f0_; }
  const Poly<T>& f1() const { return f1_; }
  int degree() const { return d_; }
  int d0() const { return f0_.degree(); }
  int d1() const { return f1_.degree(); }
  const T& c0() const { return f0_.leading(); }
  const T& c1() const { return f1_.leading(); }

  bool is_polynomial() const { return d0() == 0; }
  bool fixes_infinity() const { return d1() == d_ && d0() < d_; }

  /// Coefficient of p0^(d-k) p1^k in F_i.
  T coefficient(int row, int k) const { return row == 0 ? f0_[k] : f1_[k]; }

  /// F(x0, x1) on K^2.
  std::pair<T, T> evaluate(const T& x0, const T& x1) const {
    T a{0}, b{0};
    T pw0{1};
    std::vector<T> pw1(static_cast<std::size_t>(d_) + 1);
    pw1[0] = T{1};
    for (int k = 1; k <= d_; ++k) pw1[static_cast<std::size_t>(k)] = pw1[static_cast<std::size_t>(k - 1)] * x1;
    for (int k = d_; k >= 0; --k) {
      a += f0_[k] * pw0 * pw1[static_cast<std::size_t>(k)];
      b += f1_[k] * pw0 * pw1[static_cast<std::size_t>(k)];
      pw0 *= x0;
    }
    return {a, b};
  }

  /// f(z) on P^1.
  P1Point<T> apply(const P1Point<T>& z) const {
    auto [a, b] = z.infinite ? evaluate(T{0}, T{1}) : evaluate(T{1}, z.value);
    if (a == T{0}) return P1Point<T>::infinity();
    return P1Point<T>::at(T(b / a));
  }

  HomogeneousLift scaled(const T& s) const { return HomogeneousLift(f0_.scaled(s), f1_.scaled(s), d_); }

  friend bool operator==(const HomogeneousLift& a, const HomogeneousLift& b) {
    return a.d_ == b.d_ && a.f0_ == b.f0_ && a.f1_ == b.f1_;
  }

 private:
  Poly<T> f0_;
  Poly<T> f1_;
  int d_ = 1;
};

/// Res F = c0^(d-d1) c1^(d-d0) R(F0(1,.), F1(1,.)); zero for degenerate pairs.
template <class T>
T res_f(const HomogeneousLift<T>& f) {
  if (f.f0().is_zero() || f.f1().is_zero()) return T{0};
  const long d = f.degree();
  if (f.d0() < d && f.d1() < d) return T{0};  // common root at infinity
  return detail::ipow(f.c0(), d - f.d1()) * detail::ipow(f.c1(), d - f.d0()) * sylvester_resultant(f.f0(), f.f1());
}

/// Homogeneous composition F o G, of degree d_F d_G.
template <class T>
HomogeneousLift<T> compose(const HomogeneousLift<T>& f, const HomogeneousLift<T>& g) {
  const int df = f.degree();
  std::vector<Poly<T>> g0_pows(static_cast<std::size_t>(df) + 1), g1_pows(static_cast<std::size_t>(df) + 1);
  g0_pows[0] = g1_pows[0] = Poly<T>::constant(T{1});
  for (int k = 1; k <= df; ++k) {
    g0_pows[static_cast<std::size_t>(k)] = g0_pows[static_cast<std::size_t>(k - 1)] * g.f0();
    g1_pows[static_cast<std::size_t>(k)] = g1_pows[static_cast<std::size_t>(k - 1)] * g.f1();
  }
  Poly<T> h0, h1;
  for (int k = 0; k <= df; ++k) {
    const Poly<T> term = g1_pows[static_cast<std::size_t>(k)] * g0_pows[static_cast<std::size_t>(df - k)];
    h0 += term.scaled(f.f0()[k]);
    h1 += term.scaled(f.f1()[k]);
  }
  return HomogeneousLift<T>(std::move(h0), std::move(h1), df * g.degree());
}

/// F^n (F^0 = identity lift).
template <class T>
HomogeneousLift<T> iterate(const HomogeneousLift<T>& f, int n) {
  if (n < 0) throw std::invalid_argument("negative iterate");
  HomogeneousLift<T> r = HomogeneousLift<T>::identity();
  for (int i = 0; i < n; ++i) r = compose(f, r);
  return r;
}

/// Outcome of lift normalization. `offset` is V_{g_F} of the input lift,
/// i.e. -log|Res F| / (d(d-1)); `offset_log_p` is the same value in units of
/// log p for non-archimedean fields.
template <class T>
struct NormalizedLift {
  HomogeneousLift<T> lift;
  bool rescaled = false;
  double offset = 0.0;
  std::optional<Rational> offset_log_p;
  /// V_{g} of the returned lift (0 when rescaled).
  double residual_offset() const { return rescaled ? 0.0 : offset; }
};

inline NormalizedLift<Complex> normalize_lift(const ComplexField&, const HomogeneousLift<Complex>& f) {
  const double d = f.degree();
  const double log_res = std::log(std::abs(res_f(f)));
  if (!std::isfinite(log_res)) throw std::domain_error("degenerate lift: Res F = 0");
  NormalizedLift<Complex> out;
  out.offset = -log_res / (d * (d - 1.0));
  out.lift = f.scaled(Complex(std::exp(-log_res / (2.0 * d)), 0.0));
  out.rescaled = true;
  return out;
}

inline NormalizedLift<Rational> normalize_lift(const PadicField& field, const HomogeneousLift<Rational>& f) {
  const Rational res = res_f(f);
  if (sgn(res) == 0) throw std::domain_error("degenerate lift: Res F = 0");
  const long d = f.degree();
  const long k = valuation(res, field.p);  // |Res F| = p^-k
  NormalizedLift<Rational> out;
  out.offset_log_p = ratio(k, d * (d - 1));
  out.offset = out.offset_log_p->get_d() * std::log(static_cast<double>(field.p));
  if (k % (2 * d) == 0) {
    out.lift = f.scaled(field.power(-k / (2 * d)));
    out.rescaled = true;
  } else {
    out.lift = f;
  }
  return out;
}

/// A rational map of degree > 1: a lift together with the offset V_g of that
/// lift's Green function, so g_f = g_F + offset / 2.
template <class T>
struct RationalMap {
  HomogeneousLift<T> lift;
  double offset = 0.0;
  std::optional<Rational> offset_log_p;

  int degree() const { return lift.degree(); }
};

template <class Field>
RationalMap<typename Field::value_type> make_rational_map(const Field& field,
                                                          const HomogeneousLift<typename Field::value_type>& f) {
  if (f.degree() < 2) throw std::invalid_argument("rational map must have degree > 1");
  auto n = normalize_lift(field, f);
  RationalMap<typename Field::value_type> m;
  m.lift = n.lift;
  m.offset = n.residual_offset();
  if (!n.rescaled) m.offset_log_p = n.offset_log_p;
  else if (n.offset_log_p) m.offset_log_p = Rational(0);
  return m;
}

/// The polynomial (F^n)_1 (F^k)_0 - (F^k)_1 (F^n)_0 in z, whose roots
/// (with infinity of multiplicity d^n + d^k - degree) form [f^n = f^k].
template <class T>
std::pair<Poly<T>, int> coincidence_polynomial(const HomogeneousLift<T>& f, int n, int k) {
  if (n < 1 || k < 0 || k >= n) throw std::invalid_argument("need n >= 1 and 0 <= k < n");
  const auto fn = iterate(f, n);
  const auto fk = iterate(f, k);
  Poly<T> h = fn.f1() * fk.f0() - fk.f1() * fn.f0();
  const int total = fn.degree() + fk.degree();
  return {std::move(h), total};
}

/// Mobius transformation z -> (a z + b) / (c z + d) as a degree-1 lift.
template <class T>
HomogeneousLift<T> mobius(const T& a, const T& b, const T& c, const T& d) {
  // (p0, p1) -> (c p1 + d p0, a p1 + b p0)
  return HomogeneousLift<T>(Poly<T>{d, c}, Poly<T>{b, a}, 1);
}

/// Inverse of a degree-1 lift, up to scalar.
template <class T>
HomogeneousLift<T> mobius_inverse(const HomogeneousLift<T>& m) {
  if (m.degree() != 1) throw std::invalid_argument("not a Mobius lift");
  const T a = m.f1()[1], b = m.f1()[0], c = m.f0()[1], d = m.f0()[0];
  return mobius<T>(d, -b, -c, a);
}

/// m o f o m^{-1}.
template <class T>
HomogeneousLift<T> conjugate(const HomogeneousLift<T>& f, const HomogeneousLift<T>& m) {
  return compose(m, compose(f, mobius_inverse(m)));
}

}  // namespace greenline
