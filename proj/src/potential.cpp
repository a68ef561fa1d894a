#include "greenline/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "greenline/map_parser.hpp"

namespace greenline {

namespace {

using kernels::Cloud;
using kernels::Kernel;

kernels::Potentials run_potentials(const Cloud& atoms, const Cloud& queries, Kernel k, const ClassicalOptions& opt,
                                   bool skip_self) {
  return opt.parallel ? kernels::potentials_parallel(atoms, queries, k, opt.floor, skip_self)
                      : kernels::potentials_serial(atoms, queries, k, opt.floor, skip_self);
}

kernels::Sum run_pairs(const Cloud& c, Kernel k, const ClassicalOptions& opt) {
  return opt.parallel ? kernels::pair_sum_parallel(c, k, opt.floor) : kernels::pair_sum_serial(c, k, opt.floor);
}

double log_chordal(const ClassicalPoint& a, const ClassicalPoint& b) {
  return std::log(chordal(ComplexField{}, a, b).value());
}

// Per-atom log[w_i, z0]; the correction terms of the kernel normalized at z0.
std::vector<double> pole_terms(const ClassicalMeasure& nu, const ClassicalPoint& pole) {
  std::vector<double> out;
  out.reserve(nu.size());
  for (const auto& a : nu.atoms) {
    const double v = log_chordal(a.point, pole);
    if (!std::isfinite(v)) throw std::domain_error("measure has an atom at the pole");
    out.push_back(v);
  }
  return out;
}

// sum_{i != j} m_i m_j
double pair_mass(const ClassicalMeasure& nu) {
  double total = 0.0, squares = 0.0;
  for (const auto& a : nu.atoms) {
    total += a.mass;
    squares += a.mass * a.mass;
  }
  return total * total - squares;
}

}  // namespace

Clamped potential(const ClassicalMeasure& nu, const ClassicalPoint& pole, const ClassicalPoint& z,
                  const ClassicalOptions& opt) {
  const Cloud atoms = Cloud::of(nu);
  const Cloud query = Cloud::of_points({z});
  Clamped out;
  if (pole.infinite) {
    if (z.infinite) throw std::domain_error("potential evaluated at its pole");
    const auto r = run_potentials(atoms, query, Kernel::affine, opt, false);
    out.value = r.values[0];
    out.collisions = r.collisions;
    return out;
  }
  const double lz = log_chordal(z, pole);
  if (!std::isfinite(lz)) throw std::domain_error("potential evaluated at its pole");
  const auto r = run_potentials(atoms, query, Kernel::chordal, opt, false);
  const auto terms = pole_terms(nu, pole);
  double s = r.values[0];
  for (std::size_t i = 0; i < nu.size(); ++i) s -= nu.atoms[i].mass * (terms[i] + lz);
  out.value = s;
  out.collisions = r.collisions;
  return out;
}

std::vector<double> self_potentials(const ClassicalMeasure& nu, const ClassicalPoint& pole,
                                    const ClassicalOptions& opt) {
  const Cloud atoms = Cloud::of(nu);
  if (pole.infinite) return run_potentials(atoms, atoms, Kernel::affine, opt, true).values;
  auto r = run_potentials(atoms, atoms, Kernel::chordal, opt, true).values;
  const auto terms = pole_terms(nu, pole);
  double total = 0.0, weighted = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    total += nu.atoms[i].mass;
    weighted += nu.atoms[i].mass * terms[i];
  }
  for (std::size_t i = 0; i < nu.size(); ++i) {
    const double m = nu.atoms[i].mass;
    r[i] -= (weighted - m * terms[i]) + (total - m) * terms[i];
  }
  return r;
}

Clamped energy(const ClassicalMeasure& nu, const ClassicalPoint& pole, const ClassicalOptions& opt) {
  Clamped out;
  const double pm = pair_mass(nu);
  if (nu.size() < 2 || pm <= 0.0) {
    out.degenerate = true;
    return out;
  }
  const Cloud c = Cloud::of(nu);
  const double total = nu.total_mass();
  double s = 0.0;
  if (pole.infinite) {
    const auto r = run_pairs(c, Kernel::affine, opt);
    s = r.value;
    out.collisions = r.collisions;
  } else {
    const auto r = run_pairs(c, Kernel::chordal, opt);
    const auto terms = pole_terms(nu, pole);
    s = r.value;
    for (std::size_t i = 0; i < nu.size(); ++i) s -= 2.0 * nu.atoms[i].mass * (total - nu.atoms[i].mass) * terms[i];
    out.collisions = r.collisions;
  }
  out.value = total * total * s / pm;
  return out;
}

double weighted_kernel(const Weight& g, const ClassicalPoint& z, const ClassicalPoint& w) {
  return log_chordal(z, w) - g(z) - g(w);
}

Clamped weighted_energy(const ClassicalMeasure& nu, const Weight& g, const ClassicalOptions& opt) {
  Clamped out;
  const double pm = pair_mass(nu);
  if (nu.size() < 2 || pm <= 0.0) {
    out.degenerate = true;
    return out;
  }
  const Cloud c = Cloud::of(nu);
  const auto r = run_pairs(c, Kernel::chordal, opt);
  auto gi = [&](std::size_t i) { return g(nu.atoms[i].point); };
  const auto gv = opt.parallel ? kernels::map_parallel(nu.size(), gi) : kernels::map_serial(nu.size(), gi);
  const double total = nu.total_mass();
  std::vector<double> terms(nu.size());
  for (std::size_t i = 0; i < nu.size(); ++i) terms[i] = 2.0 * nu.atoms[i].mass * (total - nu.atoms[i].mass) * gv[i];
  out.value = total * total * (r.value - kernels::blocked_sum(terms)) / pm;
  out.collisions = r.collisions;
  return out;
}

EnergyReport frostman_check(const ClassicalMeasure& nu, const ClassicalPoint& pole,
                            const std::vector<ClassicalPoint>& samples, const ClassicalOptions& opt) {
  EnergyReport rep;
  rep.pole = pole.infinite ? "inf" : std::to_string(pole.value.real()) + "+" + std::to_string(pole.value.imag()) + "i";
  if (samples.empty()) return rep;
  const Clamped e = energy(nu, pole, opt);
  rep.energy = rep.v_estimate = e.value;
  rep.collisions = e.collisions;
  for (const auto& z : samples) {
    const Clamped p = potential(nu, pole, z, opt);
    rep.collisions += p.collisions;
    Margin m;
    m.label = z.infinite ? "inf" : std::to_string(z.value.real()) + "+" + std::to_string(z.value.imag()) + "i";
    m.potential = p.value;
    m.margin = p.value - e.value;
    rep.samples.push_back(m);
  }
  return rep;
}

double ExactLog::value(unsigned long p) const { return log_p.get_d() * std::log(static_cast<double>(p)); }

std::optional<Rational> berk_log_kernel(const PadicField& k, const BerkPoint& s, const BerkPoint& t,
                                        const BerkPoint& pole) {
  const Absolute a = pole.is_infinity() ? hsia_infty(k, s, t) : hsia(k, s, t, pole);
  if (a.is_zero()) return std::nullopt;
  return a.log_p();
}

namespace {

const Rational exact_floor(-1000000);

}  // namespace

ExactLog potential(const PadicField& k, const DiscreteMeasure<BerkPoint>& nu, const BerkPoint& pole,
                   const BerkPoint& z) {
  ExactLog out;
  for (const auto& a : nu.atoms) {
    const auto v = berk_log_kernel(k, z, a.point, pole);
    if (!v) ++out.collisions;
    out.log_p += Rational(a.mass) * (v ? *v : exact_floor);
  }
  return out;
}

ExactLog energy(const PadicField& k, const DiscreteMeasure<BerkPoint>& nu, const BerkPoint& pole) {
  ExactLog out;
  Rational sum, included, total;
  for (const auto& a : nu.atoms) total += Rational(a.mass);
  for (std::size_t i = 0; i < nu.size(); ++i)
    for (std::size_t j = 0; j < nu.size(); ++j) {
      if (i == j && nu.atoms[i].point.is_classical()) continue;
      const Rational w = Rational(nu.atoms[i].mass) * Rational(nu.atoms[j].mass);
      const auto v = berk_log_kernel(k, nu.atoms[i].point, nu.atoms[j].point, pole);
      if (!v) ++out.collisions;
      sum += w * (v ? *v : exact_floor);
      included += w;
    }
  if (sgn(included) != 0) out.log_p = total * total * sum / included;
  return out;
}

double DiskEquilibrium::v(unsigned long p) const { return v_log_p.get_d() * std::log(static_cast<double>(p)); }

namespace {

// Exact Gaussian elimination; empty when singular.
std::optional<std::vector<Rational>> solve(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && sgn(a[piv][col]) == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || sgn(a[r][col]) == 0) continue;
      const Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

}  // namespace

DiskEquilibrium equilibrium_of_disks(const PadicField& k, const std::vector<Disk>& disks) {
  if (disks.empty()) throw std::invalid_argument("equilibrium_of_disks: no disks");
  const std::size_t n = disks.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Absolute ri = Absolute::power(k.p, disks[i].v), rj = Absolute::power(k.p, disks[j].v);
      if (k.abs(Rational(disks[i].center - disks[j].center)) <= max(ri, rj))
        throw std::invalid_argument("equilibrium_of_disks: disks overlap");
    }
  std::vector<BerkPoint> pts;
  for (const auto& d : disks) pts.push_back(canonical(k, d.boundary()));
  std::vector<std::vector<Rational>> kern(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) kern[i][j] = hsia_infty(k, pts[i], pts[j]).log_p();

  DiskEquilibrium out;
  std::vector<bool> active(n, true);
  std::vector<Rational> masses(n);
  bool solved = false;
  for (std::size_t round = 0; round < n && !solved; ++round) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (active[i]) idx.push_back(i);
    const std::size_t m = idx.size();
    // unknowns: masses of active atoms, then V
    std::vector<std::vector<Rational>> a(m + 1, std::vector<Rational>(m + 1));
    std::vector<Rational> b(m + 1);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) a[r][c] = kern[idx[r]][idx[c]];
      a[r][m] = -1;
    }
    for (std::size_t c = 0; c < m; ++c) a[m][c] = 1;
    b[m] = 1;
    const auto x = solve(a, b);
    if (!x) break;
    std::size_t worst = m;
    for (std::size_t r = 0; r < m; ++r)
      if (sgn((*x)[r]) < 0 && (worst == m || (*x)[r] < (*x)[worst])) worst = r;
    if (worst == m) {
      std::fill(masses.begin(), masses.end(), Rational(0));
      for (std::size_t r = 0; r < m; ++r) masses[idx[r]] = (*x)[r];
      out.v_log_p = (*x)[m];
      out.method = round == 0 ? "equal-potential linear system" : "equal-potential linear system (active set)";
      solved = true;
    } else {
      active[idx[worst]] = false;
    }
  }
  if (!solved) {
    // Projected gradient ascent of m^T A m on the simplex.
    std::vector<double> mv(n, 1.0 / static_cast<double>(n));
    for (int it = 0; it < 5000; ++it) {
      std::vector<double> grad(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) grad[i] += 2.0 * kern[i][j].get_d() * mv[j];
      for (std::size_t i = 0; i < n; ++i) mv[i] += 0.01 * grad[i];
      // Euclidean projection onto the simplex.
      std::vector<double> sorted = mv;
      std::sort(sorted.rbegin(), sorted.rend());
      double cum = 0.0, theta = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        cum += sorted[i];
        const double t = (cum - 1.0) / static_cast<double>(i + 1);
        if (sorted[i] - t > 0.0) theta = t;
      }
      for (auto& x : mv) x = std::max(0.0, x - theta);
    }
    double energy_value = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) energy_value += mv[i] * mv[j] * kern[i][j].get_d();
    for (std::size_t i = 0; i < n; ++i) masses[i] = Rational(mv[i]);
    out.v_log_p = Rational(energy_value);
    out.method = "projected-gradient";
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(masses[i]) == 0) continue;
    out.measure.add(pts[i], masses[i].get_d());
    out.masses.push_back(masses[i]);
  }
  return out;
}

std::vector<BerkMargin> frostman_check(const PadicField& k, const DiscreteMeasure<BerkPoint>& nu,
                                       const std::vector<BerkPoint>& samples) {
  std::vector<BerkMargin> out;
  if (samples.empty()) return out;
  const BerkPoint inf = BerkPoint::infinity();
  const Rational i_nu = energy(k, nu, inf).log_p;
  for (const auto& s : samples) out.push_back({s, Rational(potential(k, nu, inf, s).log_p - i_nu)});
  return out;
}

}  // namespace greenline
