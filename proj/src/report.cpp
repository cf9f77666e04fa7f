#include "klab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "klab/errors.hpp"

namespace klab {

namespace {

using nlohmann::ordered_json;

ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

double read_number(const ordered_json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

ordered_json vec_json(const Vec& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

Vec read_vec(const ordered_json& j) {
  Vec v;
  for (const auto& x : j) v.push_back(read_number(x));
  return v;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

ReportFormat parse_format(const std::string& s) {
  if (s == "json") return ReportFormat::json;
  if (s == "table") return ReportFormat::table;
  throw UsageError("format must be json or table, got '" + s + "'");
}

std::string to_json_string(const std::vector<CheckReport>& reports) {
  ordered_json arr = ordered_json::array();
  for (const CheckReport& r : reports) {
    ordered_json parts = ordered_json::array();
    for (const Residual& p : r.parts) parts.push_back({{"name", p.name}, {"value", number(p.value)}});
    arr.push_back({{"id", r.id},
                   {"anchor", r.anchor},
                   {"max_residual", number(r.max_residual)},
                   {"tolerance", number(r.tolerance)},
                   {"verdict", r.pass ? "pass" : "fail"},
                   {"worst_point", vec_json(r.worst_point)},
                   {"worst_vector", vec_json(r.worst_vector)},
                   {"points", r.points},
                   {"vectors", r.vectors},
                   {"seed", r.seed},
                   {"parts", parts},
                   {"note", r.note}});
  }
  return arr.dump(2) + "\n";
}

std::vector<CheckReport> from_json_string(const std::string& text) {
  std::vector<CheckReport> out;
  try {
    const ordered_json arr = ordered_json::parse(text);
    if (!arr.is_array()) throw UsageError("report JSON must be an array");
    for (const auto& j : arr) {
      CheckReport r;
      r.id = j.at("id").get<std::string>();
      r.anchor = j.at("anchor").get<std::string>();
      r.max_residual = read_number(j.at("max_residual"));
      r.tolerance = read_number(j.at("tolerance"));
      r.pass = j.at("verdict").get<std::string>() == "pass";
      r.worst_point = read_vec(j.at("worst_point"));
      r.worst_vector = read_vec(j.at("worst_vector"));
      r.points = j.at("points").get<std::size_t>();
      r.vectors = j.at("vectors").get<std::size_t>();
      r.seed = j.at("seed").get<std::uint64_t>();
      for (const auto& p : j.at("parts")) r.parts.push_back({p.at("name").get<std::string>(), read_number(p.at("value"))});
      r.note = j.at("note").get<std::string>();
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed report JSON: ") + e.what());
  }
  return out;
}

std::string to_table_string(const std::vector<CheckReport>& reports) {
  std::size_t w = 24;
  for (const CheckReport& r : reports) w = std::max(w, r.id.size());
  std::ostringstream os;
  auto row = [&](const std::string& id, const std::string& res, const std::string& tol, const std::string& verdict) {
    os << id << std::string(w - id.size(), ' ') << " | " << res << std::string(10 - std::min<std::size_t>(10, res.size()), ' ')
       << " | " << tol << std::string(10 - std::min<std::size_t>(10, tol.size()), ' ') << " | " << verdict << "\n";
  };
  row("id", "residual", "tol", "verdict");
  os << std::string(w, '-') << "-+-" << std::string(10, '-') << "-+-" << std::string(10, '-') << "-+-" << std::string(7, '-')
     << "\n";
  for (const CheckReport& r : reports) row(r.id, sci(r.max_residual), sci(r.tolerance), r.pass ? "PASS" : "FAIL");
  return os.str();
}

void write_report(std::ostream& os, const std::vector<CheckReport>& reports, ReportFormat format) {
  os << (format == ReportFormat::json ? to_json_string(reports) : to_table_string(reports));
}

void emit_report(const std::vector<CheckReport>& reports, ReportFormat format, const std::string& path) {
  if (path == "-") {
    write_report(std::cout, reports, format);
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  write_report(f, reports, format);
  f.close();
  if (!f) throw IoError("failed writing '" + path + "'");
}

}  // namespace klab
