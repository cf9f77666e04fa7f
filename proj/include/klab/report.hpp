#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "klab/chart.hpp"

namespace klab {

struct Residual {
  std::string name;
  double value = 0.0;

  friend bool operator==(const Residual&, const Residual&) = default;
};

/// Outcome of one named check over a sample.
struct CheckReport {
  std::string id;
  std::string anchor;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  Vec worst_point;
  Vec worst_vector;
  std::size_t points = 0;
  std::size_t vectors = 0;
  std::uint64_t seed = 0;
  std::vector<Residual> parts;
  std::string note;

  /// pass = max_residual < tolerance; NaN never passes.
  void decide() { pass = max_residual < tolerance; }

  friend bool operator==(const CheckReport&, const CheckReport&) = default;
};

enum class ReportFormat { json, table };

ReportFormat parse_format(const std::string& s);

std::string to_json_string(const std::vector<CheckReport>& reports);
std::vector<CheckReport> from_json_string(const std::string& text);
std::string to_table_string(const std::vector<CheckReport>& reports);

void write_report(std::ostream& os, const std::vector<CheckReport>& reports, ReportFormat format);

/// Writes to `path` ("-" for stdout). Unwritable path throws IoError.
void emit_report(const std::vector<CheckReport>& reports, ReportFormat format, const std::string& path);

}  // namespace klab
