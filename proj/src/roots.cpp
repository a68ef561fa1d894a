#include "greenline/roots.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace greenline {

std::vector<Complex> complex_roots(const Poly<Complex>& p, double tolerance) {
  if (p.is_zero()) throw RootFindingError("roots of the zero polynomial");
  const int low = p.low_order();
  std::vector<Complex> roots(static_cast<std::size_t>(low), Complex{});
  const int n = p.degree() - low;
  if (n == 0) return roots;

  std::vector<Complex> c(p.coeffs().begin() + low, p.coeffs().end());
  const Complex lead = c.back();
  if (n == 1) {
    roots.push_back(-c[0] / lead);
    return roots;
  }
  if (n == 2) {
    // Stable quadratic formula.
    const Complex a = c[2], b = c[1], cc = c[0];
    const Complex disc = std::sqrt(b * b - 4.0 * a * cc);
    const Complex q = (std::real(std::conj(b) * disc) >= 0.0) ? -0.5 * (b + disc) : -0.5 * (b - disc);
    const Complex r1 = q / a;
    const Complex r2 = cc / q;
    roots.push_back(r1);
    roots.push_back(r2);
  } else {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[static_cast<std::size_t>(i)] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw RootFindingError("companion eigenvalue solver failed");
    for (int i = 0; i < n; ++i) roots.push_back(solver.eigenvalues()(i));
  }

  const Poly<Complex> q(std::move(c));
  const Poly<Complex> dq = q.derivative();
  for (std::size_t i = static_cast<std::size_t>(low); i < roots.size(); ++i) {
    Complex& z = roots[i];
    const Complex dz = dq(z);
    const Complex value = q(z);
    if (std::abs(dz) > 0.0) {
      const Complex step = value / dz;
      const Complex polished = z - step;
      if (std::abs(q(polished)) <= std::abs(value)) z = polished;
    }
    double mag = 0.0, pw = 1.0;
    for (const auto& x : q.coeffs()) {
      mag += std::abs(x) * pw;
      pw *= std::max(1.0, std::abs(z));
    }
    if (!std::isfinite(std::abs(z)) || std::abs(q(z)) > tolerance * std::max(mag, 1.0) * 1e3)
      throw RootFindingError("root polish residual too large");
  }
  return roots;
}

Poly<Rational> primitive_part(const Poly<Rational>& p) {
  if (p.is_zero()) return p;
  Integer lcm_den(1);
  for (const auto& x : p.coeffs()) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), x.get_den_mpz_t());
  std::vector<Integer> ints;
  Integer content(0);
  for (const auto& x : p.coeffs()) {
    Integer v = x.get_num() * (lcm_den / x.get_den());
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), v.get_mpz_t());
    ints.push_back(v);
  }
  std::vector<Rational> out;
  for (auto& v : ints) out.emplace_back(Integer(v / content));
  return Poly<Rational>(std::move(out));
}

namespace {

std::vector<Integer> divisors(Integer n) {
  n = abs(n);
  std::vector<std::pair<Integer, int>> factors;
  for (Integer k = 2; k * k <= n; ++k) {
    int e = 0;
    while (n % k == 0) {
      n /= k;
      ++e;
    }
    if (e) factors.emplace_back(k, e);
  }
  if (n > 1) factors.emplace_back(n, 1);
  std::vector<Integer> divs{Integer(1)};
  for (const auto& [prime, e] : factors) {
    const std::size_t size = divs.size();
    Integer pw = 1;
    for (int i = 1; i <= e; ++i) {
      pw *= prime;
      for (std::size_t j = 0; j < size; ++j) divs.push_back(divs[j] * pw);
    }
  }
  return divs;
}

}  // namespace

std::vector<std::pair<Rational, int>> rational_roots(const Poly<Rational>& p) {
  if (p.is_zero()) throw RootFindingError("roots of the zero polynomial");
  std::vector<std::pair<Rational, int>> out;
  Poly<Rational> q = primitive_part(p);
  const int zero_mult = q.low_order();
  if (zero_mult > 0) {
    out.emplace_back(Rational(0), zero_mult);
    q = Poly<Rational>(std::vector<Rational>(q.coeffs().begin() + zero_mult, q.coeffs().end()));
  }
  if (q.degree() < 1) return out;
  const Integer a0 = q[0].get_num();
  const Integer an = q.leading().get_num();
  const auto num_divs = divisors(a0);
  const auto den_divs = divisors(an);
  std::vector<Rational> candidates;
  for (const auto& a : num_divs)
    for (const auto& b : den_divs) {
      Rational r(a, b);
      r.canonicalize();
      candidates.push_back(r);
      candidates.push_back(-r);
    }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (const auto& r : candidates) {
    int mult = 0;
    const Poly<Rational> linear{Rational(-r), Rational(1)};
    while (q.degree() >= 1 && sgn(q(r)) == 0) {
      q = divmod(q, linear).first;
      ++mult;
    }
    if (mult) out.emplace_back(r, mult);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace greenline
