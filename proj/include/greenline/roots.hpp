#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "greenline/poly.hpp"
#include "greenline/valued_field.hpp"

namespace greenline {

struct RootFindingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// All complex roots of a nonzero polynomial, with multiplicity, by
/// companion-matrix eigenvalues followed by one Newton polish step.
/// Throws RootFindingError when a polished residual exceeds `tolerance`
/// relative to the coefficient scale.
std::vector<Complex> complex_roots(const Poly<Complex>& p, double tolerance = 1e-10);

/// Rational roots of a polynomial with rational coefficients, each paired
/// with its multiplicity. Roots outside Q are not reported.
std::vector<std::pair<Rational, int>> rational_roots(const Poly<Rational>& p);

/// Same polynomial with integer coefficients and content 1 (leading sign kept).
Poly<Rational> primitive_part(const Poly<Rational>& p);

}  // namespace greenline
