#include "greenline/archimedean.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "greenline/roots.hpp"

namespace greenline {

namespace {

struct Unit {
  Complex x0;
  Complex x1;
};

Unit unit_of(const ClassicalPoint& z) {
  Complex a = z.infinite ? Complex(0.0) : Complex(1.0);
  Complex b = z.infinite ? Complex(1.0) : z.value;
  const double n = std::hypot(std::abs(a), std::abs(b));
  return {a / n, b / n};
}

// F_i(x0, x1) = sum_k c_k x0^(d-k) x1^k, Horner in whichever ratio is <= 1.
Complex homogeneous_eval(const Poly<Complex>& row, int d, const Complex& x0, const Complex& x1) {
  Complex acc(0.0);
  if (std::abs(x1) <= std::abs(x0)) {
    const Complex t = x1 / x0;
    for (int k = d; k >= 0; --k) acc = acc * t + row[k];
    return acc * std::pow(x0, d);
  }
  const Complex s = x0 / x1;
  for (int k = 0; k <= d; ++k) acc = acc * s + row[k];
  return acc * std::pow(x1, d);
}

// One step of the renormalized orbit: returns T_F(x) and replaces x by F(x)/|F(x)|.
double step(const ComplexLift& f, Unit& x) {
  const Complex a = homogeneous_eval(f.f0(), f.degree(), x.x0, x.x1);
  const Complex b = homogeneous_eval(f.f1(), f.degree(), x.x0, x.x1);
  const double n = std::hypot(std::abs(a), std::abs(b));
  if (!(n > 0.0) || !std::isfinite(n)) throw std::overflow_error("escape rate: homogeneous norm left the float range");
  x = {a / n, b / n};
  return std::log(n);
}

double log_ratio_unit(const ComplexLift& f, Unit x) { return step(f, x); }

// Drops leading coefficients that are negligible against the rest.
Poly<Complex> trimmed(const Poly<Complex>& p) {
  std::vector<Complex> c = p.coeffs();
  double scale = 0.0;
  for (const auto& x : c) scale = std::max(scale, std::abs(x));
  while (!c.empty() && std::abs(c.back()) <= 1e-14 * scale) c.pop_back();
  return Poly<Complex>(std::move(c));
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Selection sampling: keeps `keep` of `n` indices uniformly, in increasing order.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t keep, std::mt19937_64& rng) {
  std::vector<std::size_t> out;
  out.reserve(keep);
  std::size_t needed = keep;
  for (std::size_t i = 0; i < n && needed > 0; ++i) {
    const std::size_t left = n - i;
    if (uniform01(rng) * static_cast<double>(left) < static_cast<double>(needed)) {
      out.push_back(i);
      --needed;
    }
  }
  return out;
}

double chordal_value(const ClassicalPoint& a, const ClassicalPoint& b) { return chordal(ComplexField{}, a, b).value(); }

}  // namespace

double lift_log_ratio(const ComplexLift& f, const ClassicalPoint& z) { return log_ratio_unit(f, unit_of(z)); }

double escape_rate(const ComplexLift& f, const ClassicalPoint& z, int n) {
  if (n < 0) throw std::invalid_argument("escape_rate: negative iteration count");
  Unit x = unit_of(z);
  const double d = f.degree();
  double sum = 0.0, scale = 1.0 / d;
  for (int j = 0; j < n; ++j) {
    sum += step(f, x) * scale;
    scale /= d;
  }
  return sum;
}

GreenEvaluator::GreenEvaluator(ComplexLift lift, double offset, int max_iterations)
    : lift_(std::move(lift)), offset_(offset), max_iterations_(max_iterations) {
  if (lift_.degree() < 2) throw std::invalid_argument("Green function needs degree > 1");
  double a0 = 0.0, a1 = 0.0;
  for (const auto& c : lift_.f0().coeffs()) a0 += std::abs(c);
  for (const auto& c : lift_.f1().coeffs()) a1 += std::abs(c);
  const double upper = std::log(std::hypot(a0, a1));
  double lower = upper;
  constexpr int n_theta = 48, n_phi = 96;
  for (int i = 0; i <= n_theta; ++i) {
    const double theta = 0.5 * std::numbers::pi * i / n_theta;
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / n_phi;
      const Unit x{Complex(std::cos(theta)), std::polar(std::sin(theta), phi)};
      lower = std::min(lower, log_ratio_unit(lift_, x));
    }
  }
  tail_ = 1.25 * std::max(std::abs(upper), std::abs(lower)) / (lift_.degree() - 1.0);
}

GreenEvaluator GreenEvaluator::of_map(const ComplexMap& map, int max_iterations) {
  return GreenEvaluator(map.lift, map.offset, max_iterations);
}

int GreenEvaluator::iterations_for(double eps) const {
  if (!(eps >= 1e-14)) throw std::domain_error("green: eps below double resolution");
  int n = 1;
  double bound = tail_ / lift_.degree();
  while (bound >= eps && n < max_iterations_) {
    bound /= lift_.degree();
    ++n;
  }
  return n;
}

double GreenEvaluator::lift_green(const ClassicalPoint& z, double eps) const {
  return escape_rate(lift_, z, iterations_for(eps));
}

double GreenEvaluator::green(const ClassicalPoint& z, double eps) const { return lift_green(z, eps) + offset_ / 2.0; }

std::vector<ClassicalPoint> preimages(const ComplexLift& f, const ClassicalPoint& w) {
  const Unit u = unit_of(w);
  const Poly<Complex> h = trimmed(f.f1().scaled(u.x0) - f.f0().scaled(u.x1));
  std::vector<ClassicalPoint> out;
  out.reserve(static_cast<std::size_t>(f.degree()));
  if (!h.is_zero() && h.degree() > 0)
    for (const auto& r : complex_roots(h)) out.push_back(ClassicalPoint::at(r));
  while (out.size() < static_cast<std::size_t>(f.degree())) out.push_back(ClassicalPoint::infinity());
  return out;
}

ClassicalMeasure preimage_measure(const ComplexLift& f, const ClassicalPoint& seed, const PreimageOptions& opt) {
  if (opt.depth < 0) throw std::invalid_argument("preimage depth must be >= 0");
  const auto d = static_cast<std::size_t>(f.degree());
  if (std::pow(static_cast<double>(d), opt.depth) > opt.budget)
    throw BudgetError("preimage tree of depth " + std::to_string(opt.depth) + " exceeds the atom budget");
  if (opt.max_atoms == 0) throw std::invalid_argument("max_atoms must be positive");

  // Last `full` levels are expanded completely; earlier levels are thinned
  // to `starts` points.
  int full = 0;
  double width = 1.0;
  while (full < opt.depth && width * static_cast<double>(d) <= static_cast<double>(opt.max_atoms)) {
    width *= static_cast<double>(d);
    ++full;
  }
  const auto starts = std::max<std::size_t>(1, opt.max_atoms / static_cast<std::size_t>(width));

  std::vector<ClassicalPoint> level{seed};
  for (int lvl = 1; lvl <= opt.depth; ++lvl) {
    std::vector<ClassicalPoint> next(level.size() * d);
    const auto n = static_cast<long>(level.size());
    if (opt.parallel) {
      bool failed = false;
      std::string message;
#pragma omp parallel for schedule(dynamic, 8)
      for (long i = 0; i < n; ++i) {
        try {
          const auto kids = preimages(f, level[static_cast<std::size_t>(i)]);
          std::copy(kids.begin(), kids.end(), next.begin() + i * static_cast<long>(d));
        } catch (const std::exception& e) {
#pragma omp critical
          {
            failed = true;
            message = e.what();
          }
        }
      }
      if (failed) throw RootFindingError("preimage level " + std::to_string(lvl) + ": " + message);
    } else {
      for (long i = 0; i < n; ++i) {
        const auto kids = preimages(f, level[static_cast<std::size_t>(i)]);
        std::copy(kids.begin(), kids.end(), next.begin() + i * static_cast<long>(d));
      }
    }
    if (lvl <= opt.depth - full && next.size() > starts) {
      std::mt19937_64 rng(opt.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(lvl));
      std::vector<ClassicalPoint> kept;
      kept.reserve(starts);
      for (auto i : sample_indices(next.size(), starts, rng)) kept.push_back(next[i]);
      next = std::move(kept);
    }
    level = std::move(next);
  }

  ClassicalMeasure mu;
  const double mass = 1.0 / static_cast<double>(level.size());
  mu.atoms.reserve(level.size());
  for (auto& p : level) mu.add(std::move(p), mass);
  return mu;
}

ClassicalMeasure fixed_point_divisor(const ComplexLift& f, int n, int k) {
  auto [h, total] = coincidence_polynomial(f, n, k);
  h = trimmed(h);
  ClassicalMeasure out;
  if (h.degree() > 0)
    for (const auto& r : complex_roots(h)) out.add(ClassicalPoint::at(r), 1.0);
  const int at_infinity = total - std::max(h.degree(), 0);
  if (at_infinity > 0) out.add(ClassicalPoint::infinity(), at_infinity);
  return out;
}

DiscreteMeasure<P1Point<Rational>> fixed_point_divisor(const HomogeneousLift<Rational>& f, int n, int k) {
  const auto [h, total] = coincidence_polynomial(f, n, k);
  DiscreteMeasure<P1Point<Rational>> out;
  int found = 0;
  if (h.degree() > 0) {
    for (const auto& [r, m] : rational_roots(h)) {
      out.add(P1Point<Rational>::at(r), m);
      found += m;
    }
    if (found != h.degree()) throw RootFindingError("fixed point divisor has roots outside Q");
  }
  const int at_infinity = total - std::max(h.degree(), 0);
  if (at_infinity > 0) out.add(P1Point<Rational>::infinity(), at_infinity);
  return out;
}

Complex derivative_at(const ComplexLift& f, const Complex& z) {
  const Complex q = f.f0()(z);
  if (q == Complex(0.0)) throw std::domain_error("derivative at a pole");
  const Complex p = f.f1()(z);
  return (f.f1().derivative()(z) * q - p * f.f0().derivative()(z)) / (q * q);
}

ClassicalPoint choose_seed(const ComplexLift& f) {
  const ClassicalPoint fallback = ClassicalPoint::at(Complex(0.61803, 0.41421));
  Poly<Complex> h = trimmed(f.f1() - Poly<Complex>::x() * f.f0());
  if (h.degree() < 1) return fallback;
  double best = 1.0 + 1e-9;
  ClassicalPoint seed = fallback;
  for (const auto& z : complex_roots(h)) {
    if (std::abs(f.f0()(z)) < 1e-12) continue;
    const double m = std::abs(derivative_at(f, z));
    if (m > best) {
      best = m;
      seed = ClassicalPoint::at(z);
    }
  }
  return seed;
}

BasinVerdict basin_of_infinity(const ComplexLift& f) {
  BasinVerdict v;
  if (f.is_polynomial()) {
    v.infinity_in_fatou = true;
    v.method = "polynomial: infinity is a superattracting fixed point";
    return v;
  }
  if (f.fixes_infinity()) {
    const double m = std::abs(lambda_at_infinity(f));
    v.infinity_in_fatou = m < 1.0;
    v.method = "fixed point at infinity with |lambda| = " + std::to_string(m);
    return v;
  }
  // Orbit of infinity against a perturbed orbit: attracting cycles contract.
  ClassicalPoint a = ClassicalPoint::infinity();
  ClassicalPoint b = ClassicalPoint::at(Complex(1e7, 3e6));
  double dist = chordal_value(a, b);
  for (int i = 0; i < 400 && dist > 0.0; ++i) {
    a = f.apply(a);
    b = f.apply(b);
    dist = chordal_value(a, b);
  }
  v.infinity_in_fatou = dist < 1e-12;
  v.method = "orbit of infinity vs perturbed orbit, final chordal gap " + std::to_string(dist);
  return v;
}

}  // namespace greenline
