#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

namespace greenline {

/// Univariate polynomial, coefficients lowest degree first.
///
/// Trailing exact zeros are trimmed, so the leading coefficient is nonzero
/// unless the polynomial is zero (empty coefficient vector).
template <class T>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
  Poly(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }

  static Poly constant(T a) { return Poly(std::vector<T>{std::move(a)}); }
  static Poly monomial(T a, int k) {
    std::vector<T> c(static_cast<std::size_t>(k) + 1, T{0});
    c.back() = std::move(a);
    return Poly(std::move(c));
  }
  static Poly x() { return monomial(T{1}, 1); }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<T>& coeffs() const { return c_; }

  /// Coefficient of z^k (zero beyond the degree).
  T operator[](int k) const {
    return k >= 0 && k <= degree() ? c_[static_cast<std::size_t>(k)] : T{0};
  }
  const T& leading() const {
    if (c_.empty()) throw std::logic_error("leading coefficient of zero polynomial");
    return c_.back();
  }

  /// Number of vanishing low-order coefficients (multiplicity of the root 0).
  int low_order() const {
    int k = 0;
    while (k <= degree() && c_[static_cast<std::size_t>(k)] == T{0}) ++k;
    return k;
  }

  T operator()(const T& x) const {
    T acc{0};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Poly derivative() const {
    if (degree() < 1) return {};
    std::vector<T> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * T(static_cast<long>(k));
    return Poly(std::move(d));
  }

  /// P(z + a).
  Poly taylor_shift(const T& a) const {
    std::vector<T> b = c_;
    const std::size_t n = b.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t k = n - 1; k > i; --k) b[k - 1] += a * b[k];
    return Poly(std::move(b));
  }

  /// P(Q(z)).
  Poly compose(const Poly& q) const {
    Poly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * q + Poly::constant(*it);
    return acc;
  }

  Poly scaled(const T& s) const {
    std::vector<T> r = c_;
    for (auto& x : r) x *= s;
    return Poly(std::move(r));
  }

  template <class Fn>
  auto map(Fn&& fn) const {
    using U = std::decay_t<decltype(fn(std::declval<const T&>()))>;
    std::vector<U> r;
    r.reserve(c_.size());
    for (const auto& x : c_) r.push_back(fn(x));
    return Poly<U>(std::move(r));
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T{0});
    for (std::size_t k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) r[k] += b.c_[k];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T{0});
    for (std::size_t k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) r[k] -= b.c_[k];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a) { return a.scaled(T{-1}); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> r(a.c_.size() + b.c_.size() - 1, T{0});
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(r));
  }
  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  Poly pow(int e) const {
    Poly r = Poly::constant(T{1});
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == T{0}) c_.pop_back();
  }

  std::vector<T> c_;
};

/// Euclidean division over an exact field.
template <class T>
std::pair<Poly<T>, Poly<T>> divmod(const Poly<T>& a, const Poly<T>& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly<T>{}, a};
  std::vector<T> rem = a.coeffs();
  std::vector<T> quot(static_cast<std::size_t>(a.degree() - b.degree()) + 1, T{0});
  const T& lead = b.leading();
  for (int k = a.degree() - b.degree(); k >= 0; --k) {
    const auto top = static_cast<std::size_t>(k + b.degree());
    T q = rem[top] / lead;
    quot[static_cast<std::size_t>(k)] = q;
    for (int j = 0; j <= b.degree(); ++j) rem[static_cast<std::size_t>(k + j)] -= q * b.coeffs()[static_cast<std::size_t>(j)];
  }
  rem.resize(static_cast<std::size_t>(b.degree()));
  return {Poly<T>(std::move(quot)), Poly<T>(std::move(rem))};
}

/// Monic gcd over an exact field; gcd(0, 0) = 0.
template <class T>
Poly<T> gcd(Poly<T> a, Poly<T> b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a.scaled(T{1} / a.leading());
}

}  // namespace greenline
