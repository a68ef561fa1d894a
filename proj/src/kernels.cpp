#include "greenline/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace greenline::kernels {

namespace {

void push(Cloud& c, const ClassicalPoint& p, double mass) {
  Complex a = p.infinite ? Complex(0.0) : Complex(1.0);
  Complex b = p.infinite ? Complex(1.0) : p.value;
  const double n = std::hypot(std::abs(a), std::abs(b));
  a /= n;
  b /= n;
  c.x0.push_back(a);
  c.x1.push_back(b);
  c.mass.push_back(mass);
  c.log_x0.push_back(p.infinite ? -std::numeric_limits<double>::infinity() : std::log(std::abs(a)));
}

void require_finite(const Cloud& c, Kernel k) {
  if (k == Kernel::affine && c.has_infinity())
    throw std::invalid_argument("affine kernel needs atoms away from infinity");
}

struct LogKernel {
  const Cloud& a;
  const Cloud& b;
  Kernel kind;
  double floor;

  double operator()(std::size_t i, std::size_t j, std::size_t& collisions) const {
    const double w = std::abs(a.x0[i] * b.x1[j] - a.x1[i] * b.x0[j]);
    if (w == 0.0) {
      ++collisions;
      return floor;
    }
    double v = std::log(w);
    if (kind == Kernel::affine) v -= a.log_x0[i] + b.log_x0[j];
    return v;
  }
};

double row_pairs(const LogKernel& k, std::size_t i, std::size_t& collisions) {
  const Cloud& c = k.a;
  double s = 0.0;
  for (std::size_t j = i + 1; j < c.size(); ++j) s += c.mass[j] * k(i, j, collisions);
  return 2.0 * c.mass[i] * s;
}

double row_potential(const LogKernel& k, std::size_t q, bool skip_self, std::size_t& collisions) {
  const Cloud& atoms = k.b;
  double s = 0.0;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (skip_self && j == q) continue;
    s += atoms.mass[j] * k(q, j, collisions);
  }
  return s;
}

}  // namespace

Cloud Cloud::of(const ClassicalMeasure& nu) {
  Cloud c;
  for (const auto& a : nu.atoms) push(c, a.point, a.mass);
  return c;
}

Cloud Cloud::of_points(const std::vector<ClassicalPoint>& pts) {
  Cloud c;
  for (const auto& p : pts) push(c, p, 1.0);
  return c;
}

bool Cloud::has_infinity() const {
  for (const auto& a : x0)
    if (a == Complex(0.0)) return true;
  return false;
}

Sum pair_sum_serial(const Cloud& c, Kernel k, double floor) {
  require_finite(c, k);
  const LogKernel ker{c, c, k, floor};
  Sum out;
  for (std::size_t i = 0; i < c.size(); ++i) out.value += row_pairs(ker, i, out.collisions);
  return out;
}

Sum pair_sum_parallel(const Cloud& c, Kernel k, double floor) {
  require_finite(c, k);
  const LogKernel ker{c, c, k, floor};
  const std::size_t n = c.size();
  const std::size_t blocks = (n + block_size - 1) / block_size;
  std::vector<double> partial(blocks, 0.0);
  std::vector<std::size_t> hits(blocks, 0);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t b = 0; b < blocks; ++b) {
    double s = 0.0;
    std::size_t col = 0;
    for (std::size_t i = b * block_size; i < std::min(n, (b + 1) * block_size); ++i) s += row_pairs(ker, i, col);
    partial[b] = s;
    hits[b] = col;
  }
  Sum out;
  for (std::size_t b = 0; b < blocks; ++b) {
    out.value += partial[b];
    out.collisions += hits[b];
  }
  return out;
}

Potentials potentials_serial(const Cloud& atoms, const Cloud& queries, Kernel k, double floor, bool skip_self) {
  require_finite(atoms, k);
  require_finite(queries, k);
  const LogKernel ker{queries, atoms, k, floor};
  Potentials out;
  out.values.resize(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) out.values[q] = row_potential(ker, q, skip_self, out.collisions);
  return out;
}

Potentials potentials_parallel(const Cloud& atoms, const Cloud& queries, Kernel k, double floor, bool skip_self) {
  require_finite(atoms, k);
  require_finite(queries, k);
  const LogKernel ker{queries, atoms, k, floor};
  Potentials out;
  const std::size_t n = queries.size();
  out.values.resize(n);
  std::vector<std::size_t> hits(n, 0);
#pragma omp parallel for schedule(static)
  for (std::size_t q = 0; q < n; ++q) out.values[q] = row_potential(ker, q, skip_self, hits[q]);
  for (auto h : hits) out.collisions += h;
  return out;
}

std::vector<double> map_serial(std::size_t n, const std::function<double(std::size_t)>& fn) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
  return out;
}

std::vector<double> map_parallel(std::size_t n, const std::function<double(std::size_t)>& fn) {
  std::vector<double> out(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
  return out;
}

double blocked_sum(const std::vector<double>& v) {
  double total = 0.0;
  for (std::size_t b = 0; b < v.size(); b += block_size) {
    double s = 0.0;
    for (std::size_t i = b; i < std::min(v.size(), b + block_size); ++i) s += v[i];
    total += s;
  }
  return total;
}

}  // namespace greenline::kernels
