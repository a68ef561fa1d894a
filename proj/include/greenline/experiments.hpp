#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "greenline/archimedean.hpp"
#include "greenline/berk_dynamics.hpp"
#include "greenline/potential.hpp"

namespace greenline {

using Report = nlohmann::ordered_json;

inline constexpr const char* report_schema = "greenline.report/1";

/// Key-value experiment description; see docs/config-format.md.
struct ExperimentConfig {
  std::string map;
  std::string field = "complex";
  unsigned long prime = 0;
  int depth = 12;
  std::size_t max_atoms = 4096;
  double budget = 65536.0;
  std::uint64_t seed = 1;
  double tolerance = 5e-3;
  double functional_tolerance = 1e-9;
  int search_depth = 10;
  int samples = 16;
  bool parallel = true;

  bool padic() const { return field != "complex"; }
  Report echo() const;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

enum class Verdict { polynomial_consistent, characterization_violated, potentially_good_reduction, inconclusive };
std::string to_string(Verdict v);

struct Residual {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool applies = true;
  bool pass() const { return value <= tolerance; }
};

/// Full numeric outcome of the complex characterization run.
struct ComplexRun {
  ComplexMap map;
  ClassicalMeasure measure;
  ClassicalPoint seed;
  BasinVerdict basin;
  double energy = 0.0;
  double sup_margin = 0.0;
  std::size_t collisions = 0;
  std::vector<Residual> residuals;
  Verdict verdict = Verdict::inconclusive;
  std::string reading;
};

ComplexRun characterize_complex(const ExperimentConfig& cfg);
Report run_characterize(const ExperimentConfig& cfg);

struct CounterexampleCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CounterexampleRun {
  bool preconditions_ok = false;
  std::vector<std::string> precondition_failures;
  RationalLift f;
  RationalLift phi;
  ReductionVerdict reduction;
  std::vector<CounterexampleCheck> checks;
  bool all_pass() const;
};

/// phi = m o f o m^-1 with f = z^d + c and m(z) = 1/(z - z0), checked exactly.
CounterexampleRun optimal_counterexample(unsigned long p, int d, const Rational& c, const Rational& z0,
                                         int search_depth = 10);
Report run_optimal_counterexample(unsigned long p, int d, const Rational& c, const Rational& z0,
                                  int search_depth = 10);

struct Window {
  double x0 = -2.0, x1 = 2.0, y0 = -2.0, y1 = 2.0;
};

/// Row-major samples of g_f: row i is y0 + i dy, column j is x0 + j dx, with
/// dx = (x1 - x0) / (res - 1). A resolution of 1 samples the corner (x0, y0).
struct GreenGrid {
  Window window;
  int resolution = 0;
  std::vector<double> values;

  double at(int row, int col) const { return values[static_cast<std::size_t>(row * resolution + col)]; }
  Complex point(int row, int col) const;
  std::string csv() const;
  /// Binary 8-bit PGM, scaled from min to max.
  std::string pgm() const;
};

GreenGrid emit_green_grid(const GreenEvaluator& g, const Window& w, int resolution, bool parallel = true);

/// Report builders shared by the command-line tool.
Report resultant_report(const std::string& map_text, unsigned long prime);
Report measure_report(const std::string& map_text, const PreimageOptions& opt);
Report berk_image_report(const std::string& map_text, const std::string& point, unsigned long prime);
Report berk_reduce_report(const std::string& map_text, unsigned long prime, int depth);

}  // namespace greenline
