#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "klab/manifolds.hpp"
#include "klab/parallel.hpp"
#include "klab/report.hpp"

namespace klab {

enum class ManifoldType { example_r5, example_r5_tchart, warped_product, flat_control, rate_control };

/// What to build. Loaded from a builtin name or a manifold definition file.
struct ManifoldSpec {
  std::string name;
  ManifoldType type = ManifoldType::example_r5;
  ChartComponent component = ChartComponent::positive;
  double c = 1.0;
  int m = 1;
  double t_min = -3.0;
  double t_max = 3.0;
};

/// example_r5, example_r5_negative, example_r5_tchart, warped_flat,
/// warped_flat_m2, flat_control, rate_control.
std::vector<std::string> builtin_manifold_names();
ManifoldSpec builtin_manifold(const std::string& name);

/// Parses a definition file:
///   {"version": 1, "type": "warped_product" | "example_r5", "c": 2.0, "m": 1,
///    "interval": [-3, 3], "component": "positive" | "negative"}
/// Unknown keys and ill-typed values are usage errors. Keys that do not apply
/// to the chosen type are accepted and ignored.
ManifoldSpec parse_manifold_json(const std::string& text);

/// A builtin name, or else a path to a definition file.
ManifoldSpec load_manifold(const std::string& name_or_path);

ThreeKenmotsuStructure build_manifold(const ManifoldSpec& spec);

struct SuiteConfig {
  ManifoldSpec manifold = builtin_manifold("example_r5");
  int n_points = 100;
  int n_vectors = 8;
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;
  std::string out = "-";
  ReportFormat format = ReportFormat::json;
  Execution exec = Execution::parallel;
};

/// Every check id the suite can emit, in run order, with default tolerances.
const std::vector<std::pair<std::string, double>>& suite_checks();

/// Throws UsageError naming the offending field.
void validate_config(const SuiteConfig& config);

/// Runs every applicable check in order. Construction failures produce a
/// single failed "construct" report; a check that throws is reported as
/// failed with the error message in its note.
std::vector<CheckReport> run_suite(const SuiteConfig& config);

bool all_pass(const std::vector<CheckReport>& reports);

}  // namespace klab
