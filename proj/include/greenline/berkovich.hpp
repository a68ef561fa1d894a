#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "greenline/poly.hpp"
#include "greenline/valued_field.hpp"

namespace greenline {

/// A point of the Berkovich line over C_p with rational data: infinity, a
/// classical point a, or the boundary point zeta(a, p^-v) of the closed disk
/// |z - a| <= p^-v. Every radius exponent v in Q gives a type II point over C_p.
class BerkPoint {
 public:
  BerkPoint() = default;
  static BerkPoint classical(Rational a);
  static BerkPoint disk(Rational center, Rational v);
  static BerkPoint infinity();
  static BerkPoint gauss() { return disk(Rational(0), Rational(0)); }

  bool is_infinity() const { return infinite_; }
  bool is_classical() const { return infinite_ || !v_; }
  /// 1 for classical points (infinity included), 2 otherwise.
  int type() const { return is_classical() ? 1 : 2; }
  const Rational& center() const;
  /// v with radius p^-v; empty for classical points.
  const std::optional<Rational>& radius_exponent() const { return v_; }
  Absolute radius(unsigned long p) const;

 private:
  bool infinite_ = false;
  Rational a_;
  std::optional<Rational> v_;
};

/// Same point of the Berkovich line (recentring within the disk allowed).
bool same_point(const PadicField& k, const BerkPoint& s, const BerkPoint& t);
/// Representative with center 0 when the disk contains 0.
BerkPoint canonical(const PadicField& k, const BerkPoint& s);

/// |S|_inf = max(r_S, |a_S|).
Absolute abs_point(const PadicField& k, const BerkPoint& s);
/// |S - T|_inf = max(r_S, r_T, |a_S - a_T|); both points finite.
Absolute hsia_infty(const PadicField& k, const BerkPoint& s, const BerkPoint& t);
/// [S, T]_can.
Absolute hsia_can(const PadicField& k, const BerkPoint& s, const BerkPoint& t);
/// [S, T]_{S0} = [S,T]_can / ([S,S0]_can [T,S0]_can); throws when S or T is S0 of type I.
Absolute hsia(const PadicField& k, const BerkPoint& s, const BerkPoint& t, const BerkPoint& s0);

enum class Order { equal, above, below, incomparable };
struct OrderJoin {
  Order relation;
  BerkPoint join;
};
/// `above` means S >= T (the disk of S contains the disk of T).
OrderJoin order_and_join(const PadicField& k, const BerkPoint& s, const BerkPoint& t);

/// Path distance between non-classical points in units of log p.
Rational rho(const PadicField& k, const BerkPoint& s, const BerkPoint& t);

/// |P(S)|_inf = max_k |b_k| r^k with P(z + a) = sum b_k z^k.
Absolute gauss_norm(const PadicField& k, const Poly<Rational>& p, const BerkPoint& s);

/// Lower convex hull of (k, v_p(c_k)) over nonzero coefficients.
struct NewtonPolygon {
  std::vector<std::pair<int, Rational>> vertices;

  /// Segment slopes, strictly increasing.
  std::vector<Rational> slopes() const;
  /// (root valuation, multiplicity) pairs; zero roots are not included.
  std::vector<std::pair<Rational, int>> root_valuations() const;
  int length() const;
};
NewtonPolygon newton_polygon(const PadicField& k, const Poly<Rational>& p);

/// Roots of P (with multiplicity) in the closed disk of S, or in the open
/// disk when `closed` is false. A classical S counts the root multiplicity at a.
int count_roots_in_disk(const PadicField& k, const Poly<Rational>& p, const BerkPoint& s, bool closed = true);

/// {z : |z - c| <= p^-v} or {z : |z - c| < p^-v}.
struct Disk {
  Rational center;
  Rational v;
  bool closed = true;

  BerkPoint boundary() const { return BerkPoint::disk(center, v); }
};

struct DiskComponent {
  Disk disk;
  int degree = 0;
};

struct DiskPreimage {
  std::vector<DiskComponent> components;
  bool partial = false;
  std::string note;
};

/// Components of P^{-1}(target) with their mapping degrees, by descent over
/// root clusters of P - c. Clusters whose branch directions are not rational
/// are left out and flagged.
DiskPreimage polynomial_disk_preimage(const PadicField& k, const Poly<Rational>& p, const Disk& target,
                                      int max_depth = 64);

struct PointParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Grammar in docs/point-notation.md.
BerkPoint parse_point(std::string_view text, unsigned long p);
std::string format_point(const BerkPoint& s, unsigned long p);

}  // namespace greenline
