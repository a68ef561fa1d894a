#include "greenline/berk_dynamics.hpp"

#include <algorithm>
#include <set>

#include "greenline/map_parser.hpp"
#include "greenline/roots.hpp"

namespace greenline {

namespace {

Absolute power(const PadicField& k, const Rational& v) { return Absolute::power(k.p, v); }

// max_k |c_k| r^k for the Taylor coefficients c of a polynomial already shifted.
Absolute shifted_norm(const PadicField& k, const Poly<Rational>& q, const Rational& v) {
  Absolute best = Absolute::zero(k.p);
  for (int i = 0; i <= q.degree(); ++i)
    if (sgn(q[i]) != 0) best = max(best, k.abs(q[i]) * power(k, Rational(v * i)));
  return best;
}

// Multiplicity of the classical point x as a solution of f(z) = y.
int classical_multiplicity(const RationalLift& f, const P1Point<Rational>& x, const P1Point<Rational>& y) {
  const Poly<Rational> h = y.infinite ? f.f0() : f.f1() - f.f0().scaled(y.value);
  if (x.infinite) return f.degree() - std::max(h.degree(), 0);
  return h.taylor_shift(x.value).low_order();
}

// Exact image of the type II point zeta(a, p^-v) under P/Q.
BerkPoint disk_image(const PadicField& k, const Poly<Rational>& p, const Poly<Rational>& q, const Rational& a,
                     const Rational& v) {
  const Poly<Rational> ps = p.taylor_shift(a), qs = q.taylor_shift(a);
  int j = -1;
  Absolute best = Absolute::zero(k.p);
  for (int i = 0; i <= qs.degree(); ++i) {
    if (sgn(qs[i]) == 0) continue;
    const Absolute w = k.abs(qs[i]) * power(k, Rational(v * i));
    if (j < 0 || w > best) {
      best = w;
      j = i;
    }
  }
  const Rational b = ps[j] / qs[j];
  const Absolute radius = shifted_norm(k, ps - qs.scaled(b), v) / best;
  if (radius.is_zero()) throw std::domain_error("map_point: constant map");
  return BerkPoint::disk(b, radius.exponent());
}

// Degree of P/Q reduced mod p after scaling to primitive integral form.
int reduction_degree(const PadicField& k, const Poly<Rational>& p, const Poly<Rational>& q) {
  long vmin = 0;
  bool first = true;
  for (const auto* poly : {&p, &q})
    for (const auto& c : poly->coeffs())
      if (sgn(c) != 0) {
        const long v = valuation(c, k.p);
        if (first || v < vmin) vmin = v;
        first = false;
      }
  const Rational scale = k.power(-vmin);
  const long pr = static_cast<long>(k.p);
  auto reduce = [&](const Poly<Rational>& poly) {
    std::vector<long> out;
    for (const auto& c0 : poly.coeffs()) {
      const Rational c = c0 * scale;
      Integer num = c.get_num() % pr, den = c.get_den() % pr;
      if (num < 0) num += pr;
      Integer inv;
      mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), Integer(pr).get_mpz_t());
      out.push_back(Integer(num * inv % pr).get_si());
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
  };
  auto deg = [](const std::vector<long>& a) { return static_cast<int>(a.size()) - 1; };
  auto mod = [pr](long x) { return ((x % pr) + pr) % pr; };
  auto inverse = [&](long x) {
    Integer r;
    mpz_invert(r.get_mpz_t(), Integer(x).get_mpz_t(), Integer(pr).get_mpz_t());
    return r.get_si();
  };
  auto divide = [&](std::vector<long> a, const std::vector<long>& b, std::vector<long>* quot) {
    std::vector<long> qv(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
    const long lead_inv = inverse(b.back());
    while (!a.empty() && deg(a) >= deg(b)) {
      const long factor = mod(a.back() * lead_inv);
      const int shift = deg(a) - deg(b);
      qv[static_cast<std::size_t>(shift)] = factor;
      for (std::size_t i = 0; i < b.size(); ++i)
        a[static_cast<std::size_t>(shift) + i] = mod(a[static_cast<std::size_t>(shift) + i] - factor * b[i]);
      while (!a.empty() && a.back() == 0) a.pop_back();
    }
    if (quot) *quot = qv;
    return a;
  };
  const auto pb = reduce(p), qb = reduce(q);
  if (pb.empty() || qb.empty()) return 0;  // constant reduction
  std::vector<long> g = pb, h = qb;
  while (!h.empty()) {
    auto r = divide(g, h, nullptr);
    g = h;
    h = r;
  }
  std::vector<long> pq, qq;
  divide(pb, g, &pq);
  divide(qb, g, &qq);
  while (!pq.empty() && pq.back() == 0) pq.pop_back();
  while (!qq.empty() && qq.back() == 0) qq.pop_back();
  return std::max(deg(pq), deg(qq));
}

bool integral(const Rational& x) { return x.get_den() == 1; }

int local_degree_type2(const PadicField& k, const RationalLift& f, const BerkPoint& s, const BerkPoint& t,
                       std::string& method) {
  const Poly<Rational>& p = f.f1();
  const Poly<Rational>& q = f.f0();
  if (count_roots_in_disk(k, q, s) == 0) {
    if (method.empty()) method = "pole-free-disk";
    return count_roots_in_disk(k, p - q.scaled(t.center()), s);
  }
  if (count_roots_in_disk(k, p, s) == 0) {
    const BerkPoint inv = disk_image(k, q, p, s.center(), *s.radius_exponent());
    return count_roots_in_disk(k, q - p.scaled(inv.center()), s);
  }
  const Rational& v = *s.radius_exponent();
  const Rational& u = *t.radius_exponent();
  if (integral(v) && integral(u)) {
    // Move S and f(S) to the Gauss point and reduce mod p.
    const Poly<Rational> sub{s.center(), k.power(v.get_num().get_si())};
    const Poly<Rational> ps = p.compose(sub), qs = q.compose(sub);
    return reduction_degree(k, ps - qs.scaled(t.center()), qs.scaled(k.power(u.get_num().get_si())));
  }
  return 0;
}

}  // namespace

MappedPoint map_point(const PadicField& k, const RationalLift& f, const BerkPoint& s) {
  MappedPoint out;
  if (s.is_classical()) {
    const P1Point<Rational> x = s.is_infinity() ? P1Point<Rational>::infinity() : P1Point<Rational>::at(s.center());
    const P1Point<Rational> y = f.apply(x);
    out.image = y.infinite ? BerkPoint::infinity() : BerkPoint::classical(y.value);
    out.local_degree = classical_multiplicity(f, x, y);
    out.method = "classical";
    return out;
  }
  const Rational& v = *s.radius_exponent();
  out.image = disk_image(k, f.f1(), f.f0(), s.center(), v);
  if (f.degree() == 1) {
    out.local_degree = 1;
    out.method = "exact-moebius";
    return out;
  }
  if (f.is_polynomial()) out.method = "exact-polynomial";
  else if (count_roots_in_disk(k, f.f0(), s) > 0) out.method = "descent-verified";
  out.local_degree = local_degree_type2(k, f, s, out.image, out.method);
  if (out.local_degree == 0)
    out.note = "local degree undecided: zeros and poles share the disk at a non-integral radius";
  out.image = canonical(k, out.image);
  return out;
}

BerkMeasure pullback_point_mass(const PadicField& k, const RationalLift& f, const BerkPoint& s) {
  BerkMeasure out;
  if (s.is_classical()) {
    const Poly<Rational> h = s.is_infinity() ? f.f0() : f.f1() - f.f0().scaled(s.center());
    int found = 0;
    if (h.degree() > 0)
      for (const auto& [r, m] : rational_roots(h)) {
        out.add(BerkPoint::classical(r), m);
        found += m;
      }
    if (found != std::max(h.degree(), 0)) throw InexactBranch("pullback: preimages outside Q");
    const int at_inf = f.degree() - std::max(h.degree(), 0);
    if (at_inf > 0) out.add(BerkPoint::infinity(), at_inf);
    return out;
  }
  if (!f.is_polynomial()) throw InexactBranch("pullback of a non-classical point needs a polynomial map");
  const Poly<Rational> poly = f.f1().scaled(Rational(1) / f.f0()[0]);
  const auto pre = polynomial_disk_preimage(k, poly, Disk{s.center(), *s.radius_exponent(), true});
  if (pre.partial) throw InexactBranch("pullback: " + pre.note);
  for (const auto& c : pre.components) out.add(canonical(k, c.disk.boundary()), c.degree);
  return out;
}

std::string to_string(ReductionStatus s) {
  switch (s) {
    case ReductionStatus::good: return "good";
    case ReductionStatus::potentially_good: return "potentially-good";
    case ReductionStatus::none_found: return "none-found";
  }
  return "unknown";
}

namespace {

bool fixed_full_degree(const PadicField& k, const RationalLift& f, const BerkPoint& s) {
  if (s.is_classical()) return false;
  const MappedPoint m = map_point(k, f, s);
  return m.local_degree == f.degree() && same_point(k, m.image, s);
}

// Integer coefficients with no common factor.
RationalLift primitive(const RationalLift& f) {
  Integer num = 0, den = 1;
  for (const auto* row : {&f.f0(), &f.f1()})
    for (const auto& c : row->coeffs()) {
      if (sgn(c) == 0) continue;
      mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num_mpz_t());
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    }
  return f.scaled(ratio(den, num));
}

long max_abs_valuation(const PadicField& k, const RationalLift& f) {
  long best = 0;
  for (const auto* poly : {&f.f0(), &f.f1()})
    for (const auto& c : poly->coeffs())
      if (sgn(c) != 0) best = std::max(best, std::labs(valuation(c, k.p)));
  return best;
}

}  // namespace

ReductionVerdict detect_reduction(const PadicField& k, const RationalLift& f, int search_depth) {
  ReductionVerdict out;
  auto& cert = out.certificate;
  cert.depth = search_depth;

  // Gauss orbit, also the certificate when nothing is found.
  BerkPoint s = BerkPoint::gauss();
  for (int i = 0; i <= search_depth && !s.is_classical(); ++i) {
    cert.gauss_orbit.push_back(s);
    cert.radius_log_p.push_back(Rational(-*s.radius_exponent()));
    cert.abs_log_p.push_back(abs_point(k, s).log_p());
    if (i < search_depth) s = map_point(k, f, s).image;
  }
  cert.radius_nondecreasing = cert.abs_strictly_increasing = cert.radius_log_p.size() > 1;
  for (std::size_t i = 1; i < cert.radius_log_p.size(); ++i) {
    if (cert.radius_log_p[i] < cert.radius_log_p[i - 1]) cert.radius_nondecreasing = false;
    if (cert.abs_log_p[i] <= cert.abs_log_p[i - 1]) cert.abs_strictly_increasing = false;
  }

  if (fixed_full_degree(k, f, BerkPoint::gauss())) {
    out.status = ReductionStatus::good;
    out.witness = BerkPoint::gauss();
    cert.candidates_tried = 1;
    return out;
  }

  std::vector<BerkPoint> candidates;
  const long d = f.degree();
  if (f.is_polynomial()) {
    // |a_d|^(-1/(d-1)) with a_d the leading coefficient of the polynomial.
    const Rational lead = f.c1() / f.f0()[0];
    candidates.push_back(BerkPoint::disk(Rational(0), ratio(-valuation(lead, k.p), d - 1)));
  }
  std::vector<Rational> centers{Rational(0)};
  try {
    for (const auto& [r, m] : rational_roots(f.f1() - Poly<Rational>::x() * f.f0())) centers.push_back(r);
  } catch (const RootFindingError&) {
  }
  const auto f0 = f.apply(P1Point<Rational>::at(Rational(0)));
  if (!f0.infinite) centers.push_back(f0.value);
  const long bound = max_abs_valuation(k, f) + 2;
  const long steps = d * (d - 1);
  for (const auto& c : centers)
    for (long n = -bound * steps; n <= bound * steps; ++n) candidates.push_back(BerkPoint::disk(c, ratio(n, steps)));

  std::vector<BerkPoint> seen;
  auto seen_before = [&](const BerkPoint& x) {
    return std::any_of(seen.begin(), seen.end(), [&](const BerkPoint& y) { return same_point(k, x, y); });
  };
  for (const auto& start : candidates) {
    if (seen_before(start)) continue;
    ++cert.candidates_tried;
    BerkPoint x = start;
    for (int i = 0; i <= search_depth && !x.is_classical(); ++i) {
      if (fixed_full_degree(k, f, x)) {
        out.status = ReductionStatus::potentially_good;
        out.witness = canonical(k, x);
        const Rational& v = *out.witness->radius_exponent();
        if (v.get_den() == 1) {
          const Rational beta = k.power(v.get_num().get_si());
          const Rational b = out.witness->center();
          out.conjugator = mobius<Rational>(Rational(1) / beta, Rational(-b / beta), Rational(0), Rational(1));
          out.conjugate = primitive(conjugate(f, *out.conjugator));
          if (!fixed_full_degree(k, *out.conjugate, BerkPoint::gauss()))
            throw std::logic_error("conjugated map does not have good reduction");
        }
        return out;
      }
      seen.push_back(x);
      x = map_point(k, f, x).image;
    }
  }
  return out;
}

EquilibriumCheck berk_equilibrium_check(const PadicField& k, const RationalLift& f, const BerkPoint& s0) {
  EquilibriumCheck out;
  out.point = s0;
  out.pullback = pullback_point_mass(k, f, s0);
  out.verified = out.pullback.size() == 1 && same_point(k, out.pullback.atoms[0].point, s0) &&
                 out.pullback.atoms[0].mass == f.degree();
  if (out.verified)
    out.conclusion = "f^* delta_S0 = " + std::to_string(f.degree()) +
                     " delta_S0, so S0 is totally invariant and mu_f = delta_S0 = nu_inf";
  else {
    out.conclusion = "claim refuted: preimage atoms";
    for (const auto& a : out.pullback.atoms)
      out.conclusion += " " + format_point(a.point, k.p) + " (weight " + std::to_string(static_cast<int>(a.mass)) + ")";
  }
  return out;
}

}  // namespace greenline
