#pragma once

#include <cstddef>
#include <vector>

#include "greenline/valued_field.hpp"

namespace greenline {

template <class Point>
struct Atom {
  Point point;
  double mass = 0.0;
};

/// Finite weighted list of atoms.
template <class Point>
struct DiscreteMeasure {
  std::vector<Atom<Point>> atoms;

  std::size_t size() const { return atoms.size(); }
  bool empty() const { return atoms.empty(); }
  double total_mass() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.mass;
    return s;
  }
  void add(Point p, double mass) { atoms.push_back({std::move(p), mass}); }
};

using ClassicalPoint = P1Point<Complex>;
using ClassicalMeasure = DiscreteMeasure<ClassicalPoint>;

}  // namespace greenline
