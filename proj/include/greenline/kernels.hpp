#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "greenline/measure.hpp"

// Hot loops over classical atoms. Every kernel has a plain serial reference
// and an OpenMP version. The OpenMP versions reduce over fixed-size blocks
// summed in block order, so results do not depend on the thread count.
namespace greenline::kernels {

inline constexpr std::size_t block_size = 256;

/// Unit-norm homogeneous representatives (x0, x1) of classical points.
struct Cloud {
  std::vector<Complex> x0;
  std::vector<Complex> x1;
  std::vector<double> mass;
  /// log|x0|; -inf at infinity.
  std::vector<double> log_x0;

  static Cloud of(const ClassicalMeasure& nu);
  static Cloud of_points(const std::vector<ClassicalPoint>& pts);
  std::size_t size() const { return x0.size(); }
  bool has_infinity() const;
};

/// log|z - w| (pole at infinity) or log[z, w] (chordal).
enum class Kernel { affine, chordal };

struct Sum {
  double value = 0.0;
  std::size_t collisions = 0;
};

/// sum_{i != j} m_i m_j log K(z_i, z_j), coincident pairs clamped to `floor`.
Sum pair_sum_serial(const Cloud& c, Kernel k, double floor);
Sum pair_sum_parallel(const Cloud& c, Kernel k, double floor);

/// out[q] = sum_i m_i log K(query_q, atom_i). When `skip_self` is set the
/// queries are the atoms themselves and the diagonal term is left out.
struct Potentials {
  std::vector<double> values;
  std::size_t collisions = 0;
};
Potentials potentials_serial(const Cloud& atoms, const Cloud& queries, Kernel k, double floor, bool skip_self);
Potentials potentials_parallel(const Cloud& atoms, const Cloud& queries, Kernel k, double floor, bool skip_self);

/// out[i] = fn(i) for i < n.
std::vector<double> map_serial(std::size_t n, const std::function<double(std::size_t)>& fn);
std::vector<double> map_parallel(std::size_t n, const std::function<double(std::size_t)>& fn);

/// Ordered sum of out-of-line values in fixed blocks.
double blocked_sum(const std::vector<double>& v);

}  // namespace greenline::kernels
