#include "greenline/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "greenline/map_parser.hpp"
#include "greenline/roots.hpp"

namespace greenline {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class Fn>
auto parse_number(const std::string& key, const std::string& value, Fn fn) {
  try {
    std::size_t used = 0;
    auto r = fn(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return r;
  } catch (const std::exception&) {
    throw ConfigError("bad value for '" + key + "': " + value);
  }
}

// Portable uniform in [0, 1).
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

nlohmann::ordered_json complex_json(const Complex& z) { return {z.real() + 0.0, z.imag() + 0.0}; }

nlohmann::ordered_json point_json(const ClassicalPoint& z) {
  if (z.infinite) return "inf";
  return complex_json(z.value);
}

nlohmann::ordered_json lift_json(const ComplexLift& f) {
  nlohmann::ordered_json j;
  j["degree"] = f.degree();
  auto row = [](const Poly<Complex>& p) {
    auto a = nlohmann::ordered_json::array();
    for (const auto& c : p.coeffs()) a.push_back(complex_json(c));
    return a;
  };
  j["f0"] = row(f.f0());
  j["f1"] = row(f.f1());
  return j;
}

std::string log_p_text(const Rational& x) { return format_rational(x); }

nlohmann::ordered_json absolute_json(const Absolute& a) {
  if (a.is_zero()) return "0";
  return "p^" + format_rational(Rational(-a.exponent()));
}

nlohmann::ordered_json residual_json(const Residual& r) {
  nlohmann::ordered_json j;
  j["identity"] = r.name;
  j["value"] = r.value;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass();
  j["applies"] = r.applies;
  return j;
}

nlohmann::ordered_json reduction_json(const PadicField& k, const ReductionVerdict& v) {
  nlohmann::ordered_json j;
  j["status"] = to_string(v.status);
  j["witness"] = v.witness ? nlohmann::ordered_json(format_point(*v.witness, k.p)) : nlohmann::ordered_json();
  j["conjugator"] = v.conjugator ? nlohmann::ordered_json(format_lift(*v.conjugator)) : nlohmann::ordered_json();
  j["conjugate"] = v.conjugate ? nlohmann::ordered_json(format_lift(*v.conjugate)) : nlohmann::ordered_json();
  const auto& c = v.certificate;
  nlohmann::ordered_json cert;
  cert["depth"] = c.depth;
  cert["candidates_tried"] = c.candidates_tried;
  auto orbit = nlohmann::ordered_json::array();
  for (const auto& s : c.gauss_orbit) orbit.push_back(format_point(s, k.p));
  cert["gauss_orbit"] = orbit;
  auto radii = nlohmann::ordered_json::array();
  for (const auto& r : c.radius_log_p) radii.push_back(log_p_text(r));
  cert["radius_log_p"] = radii;
  auto abs = nlohmann::ordered_json::array();
  for (const auto& r : c.abs_log_p) abs.push_back(log_p_text(r));
  cert["abs_log_p"] = abs;
  cert["radius_nondecreasing"] = c.radius_nondecreasing;
  cert["abs_strictly_increasing"] = c.abs_strictly_increasing;
  j["certificate"] = cert;
  return j;
}

Report header(const std::string& command) {
  Report r;
  r["schema"] = report_schema;
  r["command"] = command;
  return r;
}

// Probes away from the atoms: annulus beyond the bulk of the measure.
std::vector<ClassicalPoint> far_samples(const ClassicalMeasure& mu, int n, std::uint64_t seed) {
  double rmax = 0.0;
  for (const auto& a : mu.atoms)
    if (!a.point.infinite) rmax = std::max(rmax, std::abs(a.point.value));
  std::mt19937_64 rng(seed ^ 0x5eed5eedULL);
  std::vector<ClassicalPoint> out;
  const double two_pi = 2.0 * std::acos(-1.0);
  for (int i = 0; i < n; ++i) {
    const double r = (1.25 + 1.25 * unit(rng)) * rmax + 0.5;
    const double t = two_pi * unit(rng);
    out.push_back(ClassicalPoint::at(std::polar(r, t)));
  }
  return out;
}

double log_chordal_to_infinity(const ClassicalPoint& z) {
  if (z.infinite) return -std::numeric_limits<double>::infinity();
  return -0.5 * std::log1p(std::norm(z.value));
}

double log_abs_f0(const ComplexLift& f, const ClassicalPoint& z) { return std::log(std::abs(f.f0()(z.value))); }

}  // namespace

// ---- config ----

Report ExperimentConfig::echo() const {
  Report j;
  j["map"] = map;
  j["field"] = field;
  j["prime"] = prime;
  j["depth"] = depth;
  j["max_atoms"] = max_atoms;
  j["budget"] = budget;
  j["seed"] = seed;
  j["tolerance"] = tolerance;
  j["functional_tolerance"] = functional_tolerance;
  j["search_depth"] = search_depth;
  j["samples"] = samples;
  j["parallel"] = parallel;
  return j;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_map = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
    auto as_int = [&](const std::string& s, std::size_t* u) { return std::stoi(s, u); };
    auto as_ul = [&](const std::string& s, std::size_t* u) { return std::stoul(s, u); };
    auto as_ull = [&](const std::string& s, std::size_t* u) { return std::stoull(s, u); };
    auto as_double = [&](const std::string& s, std::size_t* u) { return std::stod(s, u); };
    if (key == "map") {
      cfg.map = value;
      have_map = true;
    } else if (key == "field") {
      if (value == "complex") {
        cfg.field = value;
      } else if (value.rfind("p-adic", 0) == 0) {
        cfg.field = "p-adic";
        const auto open = value.find('(');
        if (open != std::string::npos) {
          const auto close = value.find(')', open);
          if (close == std::string::npos) throw ConfigError("bad field: " + value);
          cfg.prime = parse_number(key, value.substr(open + 1, close - open - 1), as_ul);
        } else if (value != "p-adic") {
          throw ConfigError("bad field: " + value);
        }
      } else {
        throw ConfigError("field must be complex or p-adic, got " + value);
      }
    } else if (key == "prime") {
      cfg.prime = parse_number(key, value, as_ul);
    } else if (key == "depth") {
      cfg.depth = parse_number(key, value, as_int);
    } else if (key == "max_atoms") {
      cfg.max_atoms = parse_number(key, value, as_ul);
    } else if (key == "budget") {
      cfg.budget = parse_number(key, value, as_double);
    } else if (key == "seed") {
      cfg.seed = parse_number(key, value, as_ull);
    } else if (key == "tolerance") {
      cfg.tolerance = parse_number(key, value, as_double);
    } else if (key == "functional_tolerance") {
      cfg.functional_tolerance = parse_number(key, value, as_double);
    } else if (key == "search_depth") {
      cfg.search_depth = parse_number(key, value, as_int);
    } else if (key == "samples") {
      cfg.samples = parse_number(key, value, as_int);
    } else if (key == "parallel") {
      if (value != "true" && value != "false") throw ConfigError("parallel must be true or false");
      cfg.parallel = value == "true";
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!have_map) throw ConfigError("missing 'map'");
  if (cfg.padic()) {
    if (cfg.prime == 0) throw ConfigError("p-adic field needs a prime");
    if (!is_prime(cfg.prime)) throw ConfigError(std::to_string(cfg.prime) + " is not prime");
  }
  if (cfg.depth < 1) throw ConfigError("depth must be positive");
  if (cfg.max_atoms < 1) throw ConfigError("max_atoms must be positive");
  if (cfg.samples < 1) throw ConfigError("samples must be positive");
  if (cfg.tolerance < 0 || cfg.functional_tolerance < 0) throw ConfigError("tolerances must be nonnegative");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::polynomial_consistent: return "polynomial-consistent";
    case Verdict::characterization_violated: return "characterization-violated";
    case Verdict::potentially_good_reduction: return "potentially-good-reduction";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

// ---- complex characterization ----

ComplexRun characterize_complex(const ExperimentConfig& cfg) {
  ComplexRun run;
  const auto parsed = parse_map(cfg.map);
  const auto raw = parsed.complex_lift();
  if (raw.degree() < 2) throw std::invalid_argument("map must have degree > 1");
  run.map = make_rational_map(ComplexField{}, raw);
  const ComplexLift& f = run.map.lift;
  const int d = f.degree();
  GreenEvaluator g(f, run.map.offset);

  run.basin = basin_of_infinity(f);
  run.seed = choose_seed(f);
  PreimageOptions opt;
  opt.depth = cfg.depth;
  opt.max_atoms = cfg.max_atoms;
  opt.budget = cfg.budget;
  opt.seed = cfg.seed;
  opt.parallel = cfg.parallel;
  run.measure = preimage_measure(f, run.seed, opt);

  ClassicalOptions copt;
  copt.parallel = cfg.parallel;
  const auto inf = ClassicalPoint::infinity();
  const Clamped e = energy(run.measure, inf, copt);
  run.energy = e.value;
  run.collisions = e.collisions;
  const double I = run.energy;

  const auto self = self_potentials(run.measure, inf, copt);
  for (double v : self) run.sup_margin = std::max(run.sup_margin, std::abs(v - I));

  const auto samples = far_samples(run.measure, cfg.samples, cfg.seed);
  const bool fatou = run.basin.infinity_in_fatou;
  const bool fixes_inf = f.fixes_infinity();
  const bool poly = f.is_polynomial();

  auto p_at = [&](const ClassicalPoint& z) {
    const Clamped c = potential(run.measure, inf, z, copt);
    run.collisions += c.collisions;
    return c.value;
  };

  {
    double worst = 0.0;
    for (const auto& z : samples) {
      const auto fz = f.apply(z);
      worst = std::max(worst, std::abs(d * g.green(z) - g.green(fz) - lift_log_ratio(f, z)));
    }
    run.residuals.push_back({"green-functional-equation", worst, cfg.functional_tolerance, true});
  }
  {
    const double v = std::abs(I + 2.0 * g.green(inf));
    run.residuals.push_back({"energy-at-infinity", v, cfg.tolerance, fatou});
  }
  {
    const double v = fixes_inf ? std::abs(std::log(std::abs(f.c1())) + (d - 1) * I / 2.0)
                               : std::numeric_limits<double>::quiet_NaN();
    run.residuals.push_back({"leading-coefficient", fixes_inf ? v : 0.0, cfg.tolerance, fatou && fixes_inf});
  }
  {
    double worst = 0.0;
    for (const auto& z : samples)
      worst = std::max(worst, std::abs(p_at(z) - (g.green(z) - log_chordal_to_infinity(z) + I / 2.0)));
    run.residuals.push_back({"potential-continuity", worst, cfg.tolerance, fatou});
  }
  {
    double worst = 0.0;
    for (const auto& z : samples) {
      const auto fz = f.apply(z);
      if (fz.infinite) continue;
      const double rhs = d * p_at(z) - p_at(fz) - (d - 1) * I / 2.0;
      worst = std::max(worst, std::abs(log_abs_f0(f, z) - rhs));
    }
    run.residuals.push_back({"potential-invariance", worst, cfg.tolerance, fatou});
  }
  std::size_t skipped = 0;
  {
    double sum = 0.0, mass = 0.0;
    for (const auto& a : run.measure.atoms) {
      const auto fz = f.apply(a.point);
      const double chord = chordal(ComplexField{}, fz, a.point).value();
      if (chord < 1e-12) {
        ++skipped;
        continue;
      }
      sum += a.mass * (std::log(chord) - g.green(fz) - g.green(a.point));
      mass += a.mass;
    }
    const double v = mass > 0 ? std::abs(sum / mass) : 0.0;
    run.residuals.push_back({"fixed-point-proximity-mean", v, cfg.tolerance, true});
  }
  {
    double sum = 0.0, mass = 0.0;
    for (const auto& a : run.measure.atoms) {
      if (a.point.infinite) continue;
      const double l = log_abs_f0(f, a.point);
      if (!std::isfinite(l)) continue;
      sum += a.mass * l;
      mass += a.mass;
    }
    const double v = mass > 0 ? std::abs(sum / mass - (d - 1) * I / 2.0) : 0.0;
    run.residuals.push_back({"lemniscate-integral", v, cfg.tolerance, fatou && fixes_inf && poly});
  }
  {
    double worst = 0.0;
    for (const auto& z : samples) {
      const double phi = log_chordal_to_infinity(z) - g.green(z) - g.green(inf);
      worst = std::max(worst, std::abs(phi + p_at(z) - I));
    }
    run.residuals.push_back({"infinity-kernel", worst, cfg.tolerance, fatou});
  }

  if (run.sup_margin <= cfg.tolerance) {
    run.verdict = Verdict::polynomial_consistent;
    run.reading =
        "consistent with mu_f = nu_inf within tolerance; numerics cannot certify equality of measures";
  } else if (run.sup_margin > 10.0 * cfg.tolerance) {
    run.verdict = Verdict::characterization_violated;
    run.reading = "p_mu - I is not constant on the Julia samples, so mu_f differs from nu_inf; by the "
                  "characterization f is not a polynomial in this coordinate";
  } else {
    run.verdict = Verdict::inconclusive;
    run.reading = "sup margin lies between the tolerance and ten times it";
  }
  if (skipped > 0) run.reading += "; " + std::to_string(skipped) + " atom(s) at fixed points skipped in the fixed-point mean";
  return run;
}

namespace {

Report complex_report(const ExperimentConfig& cfg) {
  const ComplexRun run = characterize_complex(cfg);
  const ComplexLift& f = run.map.lift;
  Report r = header("characterize");
  r["config"] = cfg.echo();
  nlohmann::ordered_json m;
  m["text"] = cfg.map;
  m["degree"] = f.degree();
  m["polynomial"] = f.is_polynomial();
  m["fixes_infinity"] = f.fixes_infinity();
  m["normalized_lift"] = lift_json(f);
  r["map"] = m;
  nlohmann::ordered_json b;
  b["infinity_in_fatou"] = run.basin.infinity_in_fatou;
  b["method"] = run.basin.method;
  b["label"] = run.basin.label;
  r["basin"] = b;
  nlohmann::ordered_json mu;
  mu["atoms"] = run.measure.size();
  mu["seed_point"] = point_json(run.seed);
  mu["depth"] = cfg.depth;
  mu["collisions"] = run.collisions;
  r["measure"] = mu;
  r["energy"] = run.energy;
  auto res = nlohmann::ordered_json::array();
  for (const auto& x : run.residuals) res.push_back(residual_json(x));
  r["residuals"] = res;
  r["sup_margin"] = run.sup_margin;
  r["verdict"] = to_string(run.verdict);
  r["certified"] = run.reading;
  return r;
}

Report padic_report(const ExperimentConfig& cfg) {
  const PadicField k(cfg.prime);
  const auto parsed = parse_map(cfg.map);
  const RationalLift f = parsed.rational_lift();
  if (f.degree() < 2) throw std::invalid_argument("map must have degree > 1");
  const int d = f.degree();
  const Rational res = res_f(f);
  if (sgn(res) == 0) throw std::domain_error("degenerate lift: Res F = 0");
  const long kres = valuation(res, k.p);

  Report r = header("characterize");
  r["config"] = cfg.echo();
  nlohmann::ordered_json m;
  m["text"] = cfg.map;
  m["lift"] = format_lift(f);
  m["degree"] = d;
  m["polynomial"] = f.is_polynomial();
  m["fixes_infinity"] = f.fixes_infinity();
  m["res_valuation"] = kres;
  r["map"] = m;

  const ReductionVerdict rv = detect_reduction(k, f, cfg.search_depth);
  r["reduction"] = reduction_json(k, rv);

  // Exact quantities of the normalized lift, in units of log p.
  auto residuals = nlohmann::ordered_json::array();
  auto exact = [&](const std::string& name, const Rational& value, bool applies) {
    nlohmann::ordered_json j;
    j["identity"] = name;
    j["value_log_p"] = log_p_text(value);
    j["tolerance"] = 0;
    j["pass"] = sgn(value) == 0;
    j["applies"] = applies;
    residuals.push_back(j);
    return sgn(value) == 0;
  };
  const Rational shift = ratio(kres, 2 * d);
  std::optional<Rational> energy_log_p;
  bool exact_ok = true;
  if (f.is_polynomial()) {
    const Rational log_c1 = Rational(-valuation(f.c1(), k.p)) + shift;
    const Rational log_c0 = Rational(-valuation(f.c0(), k.p)) + shift;
    energy_log_p = Rational(-2 * log_c1 / (d - 1));
    exact_ok &= exact("leading-coefficient", Rational(log_c1 + (d - 1) * *energy_log_p / 2), true);
    exact_ok &= exact("lemniscate-integral", Rational(log_c0 - (d - 1) * *energy_log_p / 2), true);
    r["energy_log_p"] = log_p_text(*energy_log_p);
  }

  Verdict verdict = Verdict::inconclusive;
  std::string reading;
  if (rv.status != ReductionStatus::none_found) {
    verdict = Verdict::potentially_good_reduction;
    reading = "totally invariant point " + format_point(*rv.witness, k.p) + " found; mu_f is its point mass";
    if (f.is_polynomial()) {
      const auto check = berk_equilibrium_check(k, f, *rv.witness);
      nlohmann::ordered_json ec;
      ec["verified"] = check.verified;
      ec["conclusion"] = check.conclusion;
      const Rational v = *canonical(k, *rv.witness).radius_exponent();
      const auto eq = equilibrium_of_disks(k, {Disk{canonical(k, *rv.witness).center(), v, true}});
      ec["disk_equilibrium_v_log_p"] = log_p_text(eq.v_log_p);
      r["equilibrium"] = ec;
      exact_ok &= exact("energy-at-infinity", Rational(eq.v_log_p - *energy_log_p), true);
      if (check.verified && exact_ok) reading += "; mu_f = nu_inf of the witness disk, both exact";
    }
  } else if (f.is_polynomial()) {
    verdict = exact_ok ? Verdict::polynomial_consistent : Verdict::characterization_violated;
    reading = "polynomial without potentially good reduction found in the search; exact identities hold";
  } else {
    reading = "no potentially good reduction found up to the search depth and the map is not a polynomial; "
              "mu_f = nu_inf may still hold";
  }
  r["residuals"] = residuals;
  r["verdict"] = to_string(verdict);
  r["certified"] = reading;
  return r;
}

}  // namespace

Report run_characterize(const ExperimentConfig& cfg) { return cfg.padic() ? padic_report(cfg) : complex_report(cfg); }

// ---- counterexample ----

bool CounterexampleRun::all_pass() const {
  if (!preconditions_ok || checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

CounterexampleRun optimal_counterexample(unsigned long p, int d, const Rational& c, const Rational& z0,
                                         int search_depth) {
  CounterexampleRun run;
  if (!is_prime(p)) run.precondition_failures.push_back(std::to_string(p) + " is not prime");
  if (d < 2) run.precondition_failures.push_back("degree must be at least 2");
  if (!run.precondition_failures.empty()) return run;
  const PadicField k(p);
  if (sgn(c) == 0)
    run.precondition_failures.push_back("c = 0: z^d has good reduction");
  else if (valuation(c, p) >= 0)
    run.precondition_failures.push_back("|c| <= 1: z^d + c has good reduction");
  run.preconditions_ok = run.precondition_failures.empty();

  run.f = RationalLift::of_fraction(Poly<Rational>::monomial(Rational(1), d) + Poly<Rational>::constant(c),
                                    Poly<Rational>::constant(Rational(1)));
  const auto m = mobius<Rational>(Rational(0), Rational(1), Rational(1), Rational(-z0));
  run.phi = conjugate(run.f, m);

  run.reduction = detect_reduction(k, run.phi, search_depth);
  run.checks.push_back({"no-potentially-good-reduction", run.reduction.status == ReductionStatus::none_found,
                        "detect_reduction: " + to_string(run.reduction.status)});

  const auto at_inf = run.phi.apply(P1Point<Rational>::infinity());
  run.checks.push_back({"infinity-not-fixed", !at_inf.infinite,
                        at_inf.infinite ? "phi(inf) = inf" : "phi(inf) = " + format_rational(at_inf.value)});

  const Rational fz0 = run.f.f1()(z0) / run.f.f0()(z0);
  run.checks.push_back({"z0-not-fixed", fz0 != z0, "f(z0) = " + format_rational(fz0)});

  // The equilibrium atom of the filled Julia set of z^d + c is zeta(0, |c|^(1/d)).
  const BerkPoint atom = BerkPoint::disk(Rational(0), ratio(valuation(c == 0 ? Rational(1) : c, p), d));
  const BerkPoint zp = BerkPoint::classical(z0);
  const Absolute lhs = hsia_can(k, zp, BerkPoint::infinity());
  const Absolute rhs = hsia_can(k, atom, zp);
  std::ostringstream detail;
  detail << "[z0,inf] = " << lhs.to_string() << ", [" << format_point(atom, p) << ", z0]_can = " << rhs.to_string();
  run.checks.push_back({"pole-perturbation", lhs < rhs, detail.str()});
  return run;
}

Report run_optimal_counterexample(unsigned long p, int d, const Rational& c, const Rational& z0, int search_depth) {
  const CounterexampleRun run = optimal_counterexample(p, d, c, z0, search_depth);
  Report r = header("counterexample");
  nlohmann::ordered_json in;
  in["p"] = p;
  in["d"] = d;
  in["c"] = format_rational(c);
  in["z0"] = format_rational(z0);
  in["search_depth"] = search_depth;
  r["input"] = in;
  r["preconditions_ok"] = run.preconditions_ok;
  r["precondition_failures"] = run.precondition_failures;
  if (!run.checks.empty()) {
    const PadicField k(p);
    r["f"] = format_lift(run.f);
    r["phi"] = format_lift(run.phi);
    r["reduction"] = reduction_json(k, run.reduction);
    auto checks = nlohmann::ordered_json::array();
    for (const auto& c : run.checks) {
      nlohmann::ordered_json j;
      j["check"] = c.name;
      j["pass"] = c.pass;
      j["detail"] = c.detail;
      checks.push_back(j);
    }
    r["checks"] = checks;
  }
  r["all_pass"] = run.all_pass();
  return r;
}

// ---- green grid ----

Complex GreenGrid::point(int row, int col) const {
  if (resolution == 1) return {window.x0, window.y0};
  const double dx = (window.x1 - window.x0) / (resolution - 1);
  const double dy = (window.y1 - window.y0) / (resolution - 1);
  return {window.x0 + col * dx, window.y0 + row * dy};
}

std::string GreenGrid::csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "# window " << window.x0 << ' ' << window.x1 << ' ' << window.y0 << ' ' << window.y1 << " resolution "
      << resolution << '\n';
  out << "x,y,g\n";
  for (int i = 0; i < resolution; ++i)
    for (int j = 0; j < resolution; ++j) {
      const Complex z = point(i, j);
      out << z.real() << ',' << z.imag() << ',' << at(i, j) << '\n';
    }
  return out.str();
}

std::string GreenGrid::pgm() const {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::string out = "P5\n" + std::to_string(resolution) + " " + std::to_string(resolution) + "\n255\n";
  // top image row is the largest y
  for (int i = resolution - 1; i >= 0; --i)
    for (int j = 0; j < resolution; ++j) {
      const double t = hi > lo ? (at(i, j) - lo) / (hi - lo) : 0.0;
      out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * t))));
    }
  return out;
}

GreenGrid emit_green_grid(const GreenEvaluator& g, const Window& w, int resolution, bool parallel) {
  if (resolution < 1) throw std::invalid_argument("resolution must be positive");
  if (!(w.x1 > w.x0) || !(w.y1 > w.y0)) throw std::invalid_argument("degenerate window");
  GreenGrid grid;
  grid.window = w;
  grid.resolution = resolution;
  const auto n = static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
  auto fn = [&](std::size_t idx) {
    const int i = static_cast<int>(idx / static_cast<std::size_t>(resolution));
    const int j = static_cast<int>(idx % static_cast<std::size_t>(resolution));
    return g.green(ClassicalPoint::at(grid.point(i, j)));
  };
  grid.values = parallel ? kernels::map_parallel(n, fn) : kernels::map_serial(n, fn);
  return grid;
}

// ---- small reports ----

Report resultant_report(const std::string& map_text, unsigned long prime) {
  const auto parsed = parse_map(map_text);
  Report r = header("resultant");
  r["map"] = map_text;
  if (parsed.is_real()) {
    const RationalLift f = parsed.rational_lift();
    r["lift"] = format_lift(f);
    r["degree"] = f.degree();
    const Rational res = res_f(f);
    r["resultant"] = format_rational(res);
    r["log_abs"] = std::log(std::abs(res.get_d()));
    if (f.degree() >= 2 && sgn(res) != 0) r["offset"] = 0.0 - std::log(std::abs(res.get_d())) / (f.degree() * (f.degree() - 1.0));
    if (prime != 0) {
      const PadicField k(prime);
      nlohmann::ordered_json pj;
      pj["p"] = prime;
      if (sgn(res) == 0) {
        pj["abs"] = "0";
      } else {
        const long v = valuation(res, prime);
        pj["valuation"] = v;
        pj["abs"] = absolute_json(k.abs(res));
        if (f.degree() >= 2) pj["offset_log_p"] = log_p_text(ratio(v, f.degree() * (f.degree() - 1)));
        pj["good_reduction_lift"] = v == 0;
      }
      r["p_adic"] = pj;
    }
  } else {
    if (prime != 0) throw ParseError("p-adic resultant needs rational coefficients");
    const ComplexLift f = parsed.complex_lift();
    r["degree"] = f.degree();
    const Complex res = res_f(f);
    r["resultant"] = complex_json(res);
    r["log_abs"] = std::log(std::abs(res));
    if (f.degree() >= 2 && res != Complex{})
      r["offset"] = -std::log(std::abs(res)) / (f.degree() * (f.degree() - 1.0));
  }
  return r;
}

Report measure_report(const std::string& map_text, const PreimageOptions& opt) {
  const auto parsed = parse_map(map_text);
  const auto map = make_rational_map(ComplexField{}, parsed.complex_lift());
  const auto seed = choose_seed(map.lift);
  const auto mu = preimage_measure(map.lift, seed, opt);
  Report r = header("measure");
  r["map"] = map_text;
  r["depth"] = opt.depth;
  r["max_atoms"] = opt.max_atoms;
  r["seed"] = opt.seed;
  r["seed_point"] = point_json(seed);
  r["atom_count"] = mu.size();
  r["total_mass"] = mu.total_mass();
  const Clamped e = energy(mu, ClassicalPoint::infinity(), ClassicalOptions{collision_floor, opt.parallel});
  r["energy"] = e.value;
  r["collisions"] = e.collisions;
  auto atoms = nlohmann::ordered_json::array();
  for (const auto& a : mu.atoms) {
    nlohmann::ordered_json j;
    j["z"] = point_json(a.point);
    j["mass"] = a.mass;
    atoms.push_back(j);
  }
  r["atoms"] = atoms;
  return r;
}

Report berk_image_report(const std::string& map_text, const std::string& point, unsigned long prime) {
  const PadicField k(prime);
  const RationalLift f = parse_map(map_text).rational_lift();
  const BerkPoint s = parse_point(point, prime);
  const MappedPoint img = map_point(k, f, s);
  Report r = header("berk image");
  r["map"] = map_text;
  r["p"] = prime;
  r["point"] = format_point(s, prime);
  r["image"] = format_point(img.image, prime);
  r["type"] = img.image.type();
  r["local_degree"] = img.local_degree;
  r["method"] = img.method;
  if (!img.note.empty()) r["note"] = img.note;
  return r;
}

Report berk_reduce_report(const std::string& map_text, unsigned long prime, int depth) {
  const PadicField k(prime);
  const RationalLift f = parse_map(map_text).rational_lift();
  Report r = header("berk reduce");
  r["map"] = map_text;
  r["p"] = prime;
  r["search_depth"] = depth;
  r["reduction"] = reduction_json(k, detect_reduction(k, f, depth));
  return r;
}

}  // namespace greenline
