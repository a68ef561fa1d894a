#include "greenline/map_parser.hpp"

#include <cctype>
#include <sstream>

namespace greenline {

namespace {

using GPoly = Poly<GaussianRational>;

struct Fraction {
  GPoly num;
  GPoly den;
};

Fraction constant(GaussianRational c) { return {GPoly::constant(std::move(c)), GPoly::constant(1)}; }

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Fraction parse() {
    skip();
    // optional "f =" / "f(z) =" prefix
    const std::size_t eq = s_.find('=');
    if (eq != std::string_view::npos) pos_ = eq + 1;
    Fraction f = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at column " + std::to_string(pos_ + 1) + " in '" + std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  Fraction expr() {
    Fraction acc = term();
    for (;;) {
      const char c = peek();
      if (c != '+' && c != '-') return acc;
      ++pos_;
      Fraction rhs = term();
      Fraction next;
      next.num = c == '+' ? acc.num * rhs.den + rhs.num * acc.den : acc.num * rhs.den - rhs.num * acc.den;
      next.den = acc.den * rhs.den;
      acc = std::move(next);
    }
  }

  Fraction term() {
    Fraction acc = unary();
    for (;;) {
      const char c = peek();
      if (c == '*') {
        ++pos_;
        acc = mul(acc, unary());
      } else if (c == '/') {
        ++pos_;
        Fraction rhs = unary();
        if (rhs.num.is_zero()) fail("division by zero");
        acc = Fraction{acc.num * rhs.den, acc.den * rhs.num};
      } else if (c == '(' || c == 'z' || c == 'i' || std::isdigit(static_cast<unsigned char>(c))) {
        acc = mul(acc, unary());  // implicit product, e.g. 3z^2
      } else {
        return acc;
      }
    }
  }

  static Fraction mul(const Fraction& a, const Fraction& b) { return {a.num * b.num, a.den * b.den}; }

  Fraction unary() {
    const char c = peek();
    if (c == '-') {
      ++pos_;
      Fraction f = unary();
      return {-f.num, f.den};
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  Fraction power() {
    Fraction base = atom();
    if (peek() == '^') {
      ++pos_;
      skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a nonnegative integer exponent");
      const int e = std::stoi(std::string(s_.substr(start, pos_ - start)));
      if (e > 64) fail("exponent too large");
      return {base.num.pow(e), base.den.pow(e)};
    }
    return base;
  }

  Fraction atom() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Fraction f = expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return f;
    }
    if (c == 'z') {
      ++pos_;
      return {GPoly::x(), GPoly::constant(1)};
    }
    if (c == 'i') {
      ++pos_;
      return constant(GaussianRational(Rational(0), Rational(1)));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      return constant(parse_rational(s_.substr(start, pos_ - start)));
    }
    fail("unexpected character");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string t(text);
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
  if (t.empty()) throw ParseError("empty rational literal");
  bool negative = false;
  if (t[0] == '-' || t[0] == '+') {
    negative = t[0] == '-';
    t.erase(t.begin());
  }
  Rational r;
  const auto slash = t.find('/');
  const auto dot = t.find('.');
  try {
    if (slash != std::string::npos) {
      Integer a(t.substr(0, slash)), b(t.substr(slash + 1));
      if (sgn(b) == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
      r = ratio(a, b);
    } else if (dot != std::string::npos) {
      const std::string whole = t.substr(0, dot);
      const std::string frac = t.substr(dot + 1);
      if (whole.empty() && frac.empty()) throw ParseError("bad decimal literal");
      Integer w(whole.empty() ? "0" : whole);
      Integer f(frac.empty() ? "0" : frac);
      Integer scale = 1;
      for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
      r = ratio(Integer(w * scale + f), scale);
    } else {
      r = Rational(Integer(t));
    }
  } catch (const std::invalid_argument&) {
    throw ParseError("bad rational literal '" + std::string(text) + "'");
  }
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

ParsedMap parse_map(std::string_view text) {
  Fraction f = Parser(text).parse();
  if (f.den.is_zero()) throw ParseError("denominator vanishes identically");
  if (f.num.is_zero()) throw ParseError("map is identically zero");
  const GPoly g = gcd(f.num, f.den);
  ParsedMap out;
  out.numerator = divmod(f.num, g).first;
  out.denominator = divmod(f.den, g).first;
  out.text = std::string(text);
  return out;
}

bool ParsedMap::is_real() const {
  for (const auto& c : numerator.coeffs())
    if (!c.is_real()) return false;
  for (const auto& c : denominator.coeffs())
    if (!c.is_real()) return false;
  return true;
}

HomogeneousLift<Complex> ParsedMap::complex_lift() const {
  auto to_c = [](const GaussianRational& x) { return x.to_complex(); };
  return HomogeneousLift<Complex>::of_fraction(numerator.map(to_c), denominator.map(to_c));
}

HomogeneousLift<Rational> ParsedMap::rational_lift() const {
  if (!is_real()) throw ParseError("map has non-rational coefficients: " + text);
  auto to_q = [](const GaussianRational& x) { return x.re; };
  return HomogeneousLift<Rational>::of_fraction(numerator.map(to_q), denominator.map(to_q));
}

std::string format_rational(const Rational& x) {
  Rational y = x;
  y.canonicalize();
  return y.get_str();
}

std::string format_poly(const Poly<Rational>& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = p.degree(); k >= 0; --k) {
    const Rational c = p[k];
    if (sgn(c) == 0) continue;
    const bool neg = sgn(c) < 0;
    const Rational mag = neg ? Rational(-c) : c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    const bool unit = mag == 1;
    if (k == 0 || !unit) os << format_rational(mag);
    if (k > 0 && !unit) os << "*";
    if (k >= 1) os << "z";
    if (k >= 2) os << "^" << k;
  }
  return os.str();
}

std::string format_lift(const HomogeneousLift<Rational>& f) {
  return "(" + format_poly(f.f1()) + ")/(" + format_poly(f.f0()) + ")";
}

}  // namespace greenline
