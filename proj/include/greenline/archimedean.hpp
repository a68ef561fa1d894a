#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "greenline/lift.hpp"
#include "greenline/measure.hpp"

namespace greenline {

using ComplexLift = HomogeneousLift<Complex>;
using ComplexMap = RationalMap<Complex>;

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// T_F(z) = log|F(x)| - d log|x| for any representative x of z.
double lift_log_ratio(const ComplexLift& f, const ClassicalPoint& z);

/// T_{F^n}(z) / d^n, renormalizing the homogeneous coordinates each step.
double escape_rate(const ComplexLift& f, const ClassicalPoint& z, int n);

/// Green function of a lift, g_F = lim T_{F^n}/d^n, plus the offset of the
/// lift so that `green` returns the normalized weight g_f = g_F + V/2.
class GreenEvaluator {
 public:
  explicit GreenEvaluator(ComplexLift lift, double offset = 0.0, int max_iterations = 200);
  static GreenEvaluator of_map(const ComplexMap& map, int max_iterations = 200);

  /// g_F(z) within eps.
  double lift_green(const ClassicalPoint& z, double eps = 1e-12) const;
  /// g_f(z) within eps.
  double green(const ClassicalPoint& z, double eps = 1e-12) const;
  double operator()(const ClassicalPoint& z) const { return green(z); }

  /// Number of iterations needed so that tail_bound / d^n < eps.
  int iterations_for(double eps) const;
  /// Sampled estimate of sup|T_F| / (d - 1).
  double tail_bound() const { return tail_; }
  double offset() const { return offset_; }
  const ComplexLift& lift() const { return lift_; }

 private:
  ComplexLift lift_;
  double offset_;
  int max_iterations_;
  double tail_;
};

/// The d preimages of w with multiplicity (infinity included).
std::vector<ClassicalPoint> preimages(const ComplexLift& f, const ClassicalPoint& w);

struct PreimageOptions {
  int depth = 12;
  /// Atom cap. With L the largest level such that d^L <= max_atoms, the
  /// first depth - L levels are thinned at random to max_atoms / d^L points and
  /// the last L levels are expanded in full.
  std::size_t max_atoms = 4096;
  /// Refuse when the nominal count d^depth exceeds this.
  double budget = 65536.0;
  std::uint64_t seed = 0;
  bool parallel = true;
};

/// Uniform measure on the solutions of f^n(z) = seed (pruned as configured).
/// Children of atom i occupy slots [i d, (i+1) d) of the next level, so the
/// output does not depend on the thread count.
ClassicalMeasure preimage_measure(const ComplexLift& f, const ClassicalPoint& seed, const PreimageOptions& opt);

/// f'(infinity) as the derivative of w -> 1/f(1/w) at 0. Requires f(inf) = inf.
template <class T>
T lambda_at_infinity(const HomogeneousLift<T>& f) {
  if (!f.fixes_infinity()) throw std::domain_error("lambda_at_infinity: f does not fix infinity");
  if (f.d0() == f.degree() - 1) return T(f.c0() / f.c1());
  return T{0};
}

/// [f^n = f^k] over C; atoms carry multiplicities as masses.
ClassicalMeasure fixed_point_divisor(const ComplexLift& f, int n, int k);
/// [f^n = f^k] over Q; throws RootFindingError unless every root is rational.
DiscreteMeasure<P1Point<Rational>> fixed_point_divisor(const HomogeneousLift<Rational>& f, int n, int k);

/// f'(z) at a finite point that is not a pole.
Complex derivative_at(const ComplexLift& f, const Complex& z);

/// Seed for preimage trees: the most repelling finite fixed point, or a
/// generic point when no finite fixed point is repelling.
ClassicalPoint choose_seed(const ComplexLift& f);

/// Whether infinity lies in the Fatou set, decided by orbit heuristics.
struct BasinVerdict {
  bool infinity_in_fatou = false;
  std::string method;
  std::string label = "heuristic basin";
};
BasinVerdict basin_of_infinity(const ComplexLift& f);

}  // namespace greenline
