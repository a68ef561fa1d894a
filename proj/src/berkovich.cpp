#include "greenline/berkovich.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "greenline/map_parser.hpp"

namespace greenline {

BerkPoint BerkPoint::classical(Rational a) {
  BerkPoint s;
  s.a_ = std::move(a);
  s.a_.canonicalize();
  return s;
}

BerkPoint BerkPoint::disk(Rational center, Rational v) {
  BerkPoint s;
  s.a_ = std::move(center);
  s.a_.canonicalize();
  v.canonicalize();
  s.v_ = std::move(v);
  return s;
}

BerkPoint BerkPoint::infinity() {
  BerkPoint s;
  s.infinite_ = true;
  return s;
}

const Rational& BerkPoint::center() const {
  if (infinite_) throw std::domain_error("infinity has no finite center");
  return a_;
}

Absolute BerkPoint::radius(unsigned long p) const {
  if (infinite_) throw std::domain_error("infinity has no radius");
  return v_ ? Absolute::power(p, *v_) : Absolute::zero(p);
}

namespace {

void require_finite(const BerkPoint& s, const char* what) {
  if (s.is_infinity()) throw std::domain_error(std::string(what) + ": point must be in the finite chart");
}

Absolute one_or(const PadicField& k, const Absolute& x) { return max(k.one(), x); }

BerkPoint from_radius(const Rational& a, const Absolute& r) {
  return r.is_zero() ? BerkPoint::classical(a) : BerkPoint::disk(a, r.exponent());
}

Rational val(const PadicField& k, const Rational& x) { return Rational(valuation(x, k.p)); }

bool is_integer(const Rational& x) { return x.get_den() == 1; }

}  // namespace

bool same_point(const PadicField& k, const BerkPoint& s, const BerkPoint& t) {
  if (s.is_infinity() || t.is_infinity()) return s.is_infinity() == t.is_infinity();
  if (s.radius_exponent().has_value() != t.radius_exponent().has_value()) return false;
  if (!s.radius_exponent()) return s.center() == t.center();
  if (*s.radius_exponent() != *t.radius_exponent()) return false;
  return k.abs(Rational(s.center() - t.center())) <= s.radius(k.p);
}

BerkPoint canonical(const PadicField& k, const BerkPoint& s) {
  if (s.is_classical()) return s;
  if (k.abs(s.center()) <= s.radius(k.p)) return BerkPoint::disk(Rational(0), *s.radius_exponent());
  return s;
}

Absolute abs_point(const PadicField& k, const BerkPoint& s) {
  require_finite(s, "abs_point");
  return max(s.radius(k.p), k.abs(s.center()));
}

Absolute hsia_infty(const PadicField& k, const BerkPoint& s, const BerkPoint& t) {
  require_finite(s, "hsia_infty");
  require_finite(t, "hsia_infty");
  return max(max(s.radius(k.p), t.radius(k.p)), k.abs(Rational(s.center() - t.center())));
}

Absolute hsia_can(const PadicField& k, const BerkPoint& s, const BerkPoint& t) {
  if (s.is_infinity() && t.is_infinity()) return Absolute::zero(k.p);
  if (s.is_infinity()) return k.one() / one_or(k, abs_point(k, t));
  if (t.is_infinity()) return k.one() / one_or(k, abs_point(k, s));
  return hsia_infty(k, s, t) / (one_or(k, abs_point(k, s)) * one_or(k, abs_point(k, t)));
}

Absolute hsia(const PadicField& k, const BerkPoint& s, const BerkPoint& t, const BerkPoint& s0) {
  const Absolute den = hsia_can(k, s, s0) * hsia_can(k, t, s0);
  if (den.is_zero()) throw std::domain_error("hsia: kernel is infinite at its classical pole");
  return hsia_can(k, s, t) / den;
}

OrderJoin order_and_join(const PadicField& k, const BerkPoint& s, const BerkPoint& t) {
  require_finite(s, "order_and_join");
  require_finite(t, "order_and_join");
  const Absolute rs = s.radius(k.p), rt = t.radius(k.p);
  const Absolute dist = k.abs(Rational(s.center() - t.center()));
  const bool s_above = rt <= rs && dist <= rs;
  const bool t_above = rs <= rt && dist <= rt;
  Order rel = Order::incomparable;
  if (s_above && t_above) rel = Order::equal;
  else if (s_above) rel = Order::above;
  else if (t_above) rel = Order::below;
  return {rel, from_radius(s.center(), max(max(rs, rt), dist))};
}

Rational rho(const PadicField& k, const BerkPoint& s, const BerkPoint& t) {
  if (s.is_classical() || t.is_classical()) throw std::domain_error("rho: classical points are at infinite distance");
  const BerkPoint j = order_and_join(k, s, t).join;
  const Rational& vj = *j.radius_exponent();
  return Rational(*s.radius_exponent() - vj + *t.radius_exponent() - vj);
}

Absolute gauss_norm(const PadicField& k, const Poly<Rational>& p, const BerkPoint& s) {
  require_finite(s, "gauss_norm");
  if (!s.radius_exponent()) return k.abs(p(s.center()));
  const Poly<Rational> q = p.taylor_shift(s.center());
  Absolute best = Absolute::zero(k.p);
  for (int i = 0; i <= q.degree(); ++i) {
    if (sgn(q[i]) == 0) continue;
    best = max(best, k.abs(q[i]) * Absolute::power(k.p, Rational(*s.radius_exponent() * i)));
  }
  return best;
}

std::vector<Rational> NewtonPolygon::slopes() const {
  std::vector<Rational> out;
  for (std::size_t i = 1; i < vertices.size(); ++i)
    out.emplace_back((vertices[i].second - vertices[i - 1].second) / (vertices[i].first - vertices[i - 1].first));
  return out;
}

std::vector<std::pair<Rational, int>> NewtonPolygon::root_valuations() const {
  std::vector<std::pair<Rational, int>> out;
  const auto s = slopes();
  for (std::size_t i = 0; i < s.size(); ++i)
    out.emplace_back(Rational(-s[i]), vertices[i + 1].first - vertices[i].first);
  return out;
}

int NewtonPolygon::length() const { return vertices.empty() ? 0 : vertices.back().first - vertices.front().first; }

NewtonPolygon newton_polygon(const PadicField& k, const Poly<Rational>& p) {
  NewtonPolygon np;
  auto& h = np.vertices;
  for (int i = 0; i <= p.degree(); ++i) {
    if (sgn(p[i]) == 0) continue;
    const std::pair<int, Rational> pt{i, val(k, p[i])};
    while (h.size() >= 2) {
      const auto& a = h[h.size() - 2];
      const auto& b = h[h.size() - 1];
      // drop b unless slope(a,b) < slope(b,pt)
      const Rational lhs = (b.second - a.second) * (pt.first - b.first);
      const Rational rhs = (pt.second - b.second) * (b.first - a.first);
      if (lhs >= rhs) h.pop_back();
      else break;
    }
    h.push_back(pt);
  }
  return np;
}

int count_roots_in_disk(const PadicField& k, const Poly<Rational>& p, const BerkPoint& s, bool closed) {
  if (p.is_zero()) throw std::invalid_argument("count_roots_in_disk: zero polynomial");
  require_finite(s, "count_roots_in_disk");
  const Poly<Rational> q = p.taylor_shift(s.center());
  const int zeros = q.low_order();
  if (!s.radius_exponent()) return zeros;
  const Rational& vr = *s.radius_exponent();
  int count = zeros;
  for (const auto& [v, m] : newton_polygon(k, q).root_valuations())
    if (closed ? v >= vr : v > vr) count += m;
  return count;
}

namespace {

// Root valuations of g(z + c) with multiplicity; nullopt marks a root at c.
std::vector<std::pair<std::optional<Rational>, int>> shifted_roots(const PadicField& k, const Poly<Rational>& shifted) {
  std::vector<std::pair<std::optional<Rational>, int>> out;
  if (shifted.low_order() > 0) out.emplace_back(std::nullopt, shifted.low_order());
  for (auto& [v, m] : newton_polygon(k, shifted).root_valuations()) out.emplace_back(v, m);
  return out;
}

}  // namespace

DiskPreimage polynomial_disk_preimage(const PadicField& k, const Poly<Rational>& p, const Disk& target, int max_depth) {
  if (p.degree() < 1) throw std::invalid_argument("polynomial_disk_preimage: constant polynomial");
  const Poly<Rational> g = p - Poly<Rational>::constant(target.center);
  const Rational& vr = target.v;
  DiskPreimage out;
  auto meets = [&](const Rational& h) { return target.closed ? h >= vr : h > vr; };
  auto flag = [&](const std::string& why) {
    out.partial = true;
    if (!out.note.empty()) out.note += "; ";
    out.note += why;
  };

  // Roots of g in the open disk D(c, p^-lower) (all roots when lower is empty).
  std::function<void(const Rational&, int, const std::optional<Rational>&, int)> explore =
      [&](const Rational& c, int m, const std::optional<Rational>& lower, int depth) {
        if (depth > max_depth) {
          flag("descent depth exceeded near center " + format_rational(c));
          return;
        }
        const Poly<Rational> beta = g.taylor_shift(c);
        std::optional<Rational> s_star;
        bool any_finite = false;
        int inside = 0;
        for (const auto& [v, mult] : shifted_roots(k, beta)) {
          if (v && lower && *v <= *lower) continue;
          inside += mult;
          if (v) {
            if (!any_finite || *v < *s_star) s_star = *v;
            any_finite = true;
          }
        }
        if (inside != m) {
          flag("root count mismatch near center " + format_rational(c));
          return;
        }
        auto height = [&](const Rational& t) {
          std::optional<Rational> h;
          for (int i = 0; i <= beta.degree(); ++i) {
            if (sgn(beta[i]) == 0) continue;
            Rational term = val(k, beta[i]) + t * i;
            if (!h || term < *h) h = term;
          }
          return *h;
        };
        if (!any_finite || meets(height(*s_star))) {
          std::optional<Rational> t_star;
          for (int i = 1; i <= beta.degree(); ++i) {
            if (sgn(beta[i]) == 0) continue;
            Rational t = (vr - val(k, beta[i])) / i;
            if (!t_star || t > *t_star) t_star = t;
          }
          out.components.push_back({Disk{c, *t_star, target.closed}, m});
          return;
        }
        const Rational s = *s_star;
        if (!is_integer(s)) {
          flag("branch at non-integral distance p^-" + format_rational(s) + " from " + format_rational(c));
          const int m0 = count_roots_in_disk(k, g, BerkPoint::disk(c, s), false);
          if (m0 > 0) explore(c, m0, s, depth + 1);
          return;
        }
        const Rational step = k.power(s.get_num().get_si());
        int found = 0;
        for (unsigned long j = 0; j < k.p; ++j) {
          const Rational cj = c + Rational(static_cast<long>(j)) * step;
          const int mj = count_roots_in_disk(k, g, BerkPoint::disk(cj, s), false);
          if (mj == 0) continue;
          found += mj;
          explore(cj, mj, s, depth + 1);
        }
        if (found < m) flag("directions with non-rational residues at " + format_point(BerkPoint::disk(c, s), k.p));
      };

  explore(Rational(0), g.degree(), std::nullopt, 0);
  return out;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Radius text -> exponent v (radius p^-v), or nullopt for radius 0.
std::optional<Rational> parse_radius(const std::string& text, unsigned long p) {
  const auto caret = text.find('^');
  if (caret != std::string::npos) {
    const std::string base = trim(std::string_view(text).substr(0, caret));
    if (base != "p" && base != std::to_string(p))
      throw PointParseError("radius base '" + base + "' does not match p = " + std::to_string(p));
    return Rational(-parse_rational(trim(std::string_view(text).substr(caret + 1))));
  }
  const Rational r = parse_rational(text);
  if (sgn(r) == 0) return std::nullopt;
  if (sgn(r) < 0) throw PointParseError("negative radius");
  const long v = valuation(r, p);
  if (r != PadicField(p).power(v)) throw PointParseError("radius " + text + " is not a power of p");
  return Rational(-v);
}

}  // namespace

BerkPoint parse_point(std::string_view text, unsigned long p) {
  std::string t = trim(text);
  std::string lower = t;
  for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (lower == "inf" || lower == "infinity") return BerkPoint::infinity();
  if (lower == "gauss") return BerkPoint::gauss();
  try {
    if (lower.rfind("zeta", 0) == 0) {
      const auto open = t.find('('), close = t.rfind(')'), comma = t.find(',');
      if (open == std::string::npos || close == std::string::npos || comma == std::string::npos || comma > close)
        throw PointParseError("expected zeta(center, radius)");
      const Rational a = parse_rational(trim(std::string_view(t).substr(open + 1, comma - open - 1)));
      const auto v = parse_radius(trim(std::string_view(t).substr(comma + 1, close - comma - 1)), p);
      if (!trim(std::string_view(t).substr(close + 1)).empty()) throw PointParseError("trailing text after ')'");
      return v ? BerkPoint::disk(a, *v) : BerkPoint::classical(a);
    }
    return BerkPoint::classical(parse_rational(t));
  } catch (const ParseError& e) {
    throw PointParseError(std::string("bad point '") + t + "': " + e.what());
  }
}

std::string format_point(const BerkPoint& s, unsigned long p) {
  if (s.is_infinity()) return "inf";
  if (!s.radius_exponent()) return format_rational(s.center());
  const Rational& v = *s.radius_exponent();
  std::string r;
  if (sgn(v) == 0) r = "1";
  else if (sgn(v) > 0) r = std::to_string(p) + "^-" + format_rational(v);
  else r = std::to_string(p) + "^" + format_rational(Rational(-v));
  return "zeta(" + format_rational(s.center()) + ", " + r + ")";
}

}  // namespace greenline
