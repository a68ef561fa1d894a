#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "greenline/berkovich.hpp"
#include "greenline/kernels.hpp"
#include "greenline/measure.hpp"

namespace greenline {

inline constexpr double collision_floor = -1e6;

/// A real value that may have been clamped at the collision floor.
struct Clamped {
  double value = 0.0;
  std::size_t collisions = 0;
  /// Energy of a measure with no off-diagonal pairs.
  bool degenerate = false;
  bool clamped() const { return collisions > 0; }
};

struct ClassicalOptions {
  double floor = collision_floor;
  bool parallel = true;
};

/// p_nu(z) = sum m_i log[z, w_i]_pole. The pole is infinity (affine kernel
/// |z - w|) or a classical point z0 (chordal kernel normalized at z0).
Clamped potential(const ClassicalMeasure& nu, const ClassicalPoint& pole, const ClassicalPoint& z,
                  const ClassicalOptions& opt = {});
/// Potentials of nu at each atom of nu, the atom itself left out.
std::vector<double> self_potentials(const ClassicalMeasure& nu, const ClassicalPoint& pole,
                                    const ClassicalOptions& opt = {});

/// Off-diagonal energy, normalized by the off-diagonal pair mass:
/// I = M^2 sum_{i != j} m_i m_j K_ij / sum_{i != j} m_i m_j.
Clamped energy(const ClassicalMeasure& nu, const ClassicalPoint& pole, const ClassicalOptions& opt = {});

using Weight = std::function<double(const ClassicalPoint&)>;

/// Phi_g(z, w) = log[z, w]_can - g(z) - g(w).
double weighted_kernel(const Weight& g, const ClassicalPoint& z, const ClassicalPoint& w);
/// Energy of nu for Phi_g, normalized as `energy`.
Clamped weighted_energy(const ClassicalMeasure& nu, const Weight& g, const ClassicalOptions& opt = {});

struct Margin {
  std::string label;
  double potential = 0.0;
  double margin = 0.0;
};

struct EnergyReport {
  std::string pole;
  double energy = 0.0;
  double v_estimate = 0.0;
  std::size_t collisions = 0;
  std::vector<Margin> samples;
};

/// p_nu - I_nu at each sample.
EnergyReport frostman_check(const ClassicalMeasure& nu, const ClassicalPoint& pole,
                            const std::vector<ClassicalPoint>& samples, const ClassicalOptions& opt = {});

// Exact values over the Berkovich line are rationals in units of log p.

struct ExactLog {
  Rational log_p;
  /// Number of -infinity kernel values replaced by the floor.
  std::size_t collisions = 0;
  double value(unsigned long p) const;
};

/// log_p of the kernel [S, T]_pole (|S - T|_inf for pole infinity); empty at -infinity.
std::optional<Rational> berk_log_kernel(const PadicField& k, const BerkPoint& s, const BerkPoint& t,
                                        const BerkPoint& pole);

ExactLog potential(const PadicField& k, const DiscreteMeasure<BerkPoint>& nu, const BerkPoint& pole,
                   const BerkPoint& z);
/// Pair energy; diagonal terms are kept for non-classical atoms and dropped
/// for classical ones, normalized by the included pair mass.
ExactLog energy(const PadicField& k, const DiscreteMeasure<BerkPoint>& nu, const BerkPoint& pole);

struct DiskEquilibrium {
  DiscreteMeasure<BerkPoint> measure;
  /// Exact atom masses (the double masses in `measure` are their values).
  std::vector<Rational> masses;
  /// V_inf(C) = I of the equilibrium measure, in units of log p.
  Rational v_log_p;
  std::string method;
  double v(unsigned long p) const;
};

/// Equilibrium distribution with pole infinity of a finite union of
/// pairwise disjoint closed disks.
DiskEquilibrium equilibrium_of_disks(const PadicField& k, const std::vector<Disk>& disks);

struct BerkMargin {
  BerkPoint point;
  Rational margin_log_p;
};

/// Exact p_nu - I_nu at each sample (pole infinity).
std::vector<BerkMargin> frostman_check(const PadicField& k, const DiscreteMeasure<BerkPoint>& nu,
                                       const std::vector<BerkPoint>& samples);

}  // namespace greenline
