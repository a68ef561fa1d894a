#pragma once

#include <optional>
#include <string>
#include <vector>

#include "greenline/berkovich.hpp"
#include "greenline/lift.hpp"
#include "greenline/measure.hpp"

namespace greenline {

using RationalLift = HomogeneousLift<Rational>;
using BerkMeasure = DiscreteMeasure<BerkPoint>;

struct MappedPoint {
  BerkPoint image;
  /// 0 when no exact branch could decide it (see `note`).
  int local_degree = 0;
  /// exact-polynomial, exact-moebius, pole-free-disk, descent-verified or classical.
  std::string method;
  std::string note;
};

struct InexactBranch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Image of S under f = F1(1,z)/F0(1,z) with its local degree. Lifts of any
/// degree >= 1 are accepted.
MappedPoint map_point(const PadicField& k, const RationalLift& f, const BerkPoint& s);

/// f^* delta_S with local-degree weights. Throws InexactBranch when some
/// preimage is not representable over Q.
BerkMeasure pullback_point_mass(const PadicField& k, const RationalLift& f, const BerkPoint& s);

enum class ReductionStatus { good, potentially_good, none_found };
std::string to_string(ReductionStatus s);

struct SearchCertificate {
  int depth = 0;
  std::size_t candidates_tried = 0;
  /// Orbit of the Gauss point: radius exponents v_n and log_p |S_n|.
  std::vector<BerkPoint> gauss_orbit;
  std::vector<Rational> radius_log_p;
  std::vector<Rational> abs_log_p;
  bool radius_nondecreasing = false;
  bool abs_strictly_increasing = false;
};

struct ReductionVerdict {
  ReductionStatus status = ReductionStatus::none_found;
  std::optional<BerkPoint> witness;
  /// z -> (z - b) / p^v taking the witness to the Gauss point, when v is an integer.
  std::optional<RationalLift> conjugator;
  /// Conjugated lift, checked to fix the Gauss point with full degree.
  std::optional<RationalLift> conjugate;
  SearchCertificate certificate;
};

/// Semi-decision: good reduction, a totally invariant witness, or a certificate
/// of the explored orbits.
ReductionVerdict detect_reduction(const PadicField& k, const RationalLift& f, int search_depth = 10);

struct EquilibriumCheck {
  bool verified = false;
  BerkPoint point;
  BerkMeasure pullback;
  std::string conclusion;
};

/// Verifies f^* delta_{S0} = d delta_{S0}; then mu_f = delta_{S0}.
EquilibriumCheck berk_equilibrium_check(const PadicField& k, const RationalLift& f, const BerkPoint& s0);

}  // namespace greenline
