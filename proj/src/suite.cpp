#include "klab/suite.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "klab/errors.hpp"

namespace klab {

std::vector<std::string> builtin_manifold_names() {
  return {"example_r5", "example_r5_negative", "example_r5_tchart", "warped_flat",
          "warped_flat_m2", "flat_control", "rate_control"};
}

ManifoldSpec builtin_manifold(const std::string& name) {
  ManifoldSpec s;
  s.name = name;
  if (name == "example_r5") {
    s.type = ManifoldType::example_r5;
  } else if (name == "example_r5_negative") {
    s.type = ManifoldType::example_r5;
    s.component = ChartComponent::negative;
  } else if (name == "example_r5_tchart") {
    s.type = ManifoldType::example_r5_tchart;
  } else if (name == "warped_flat") {
    s.type = ManifoldType::warped_product;
  } else if (name == "warped_flat_m2") {
    s.type = ManifoldType::warped_product;
    s.m = 2;
  } else if (name == "flat_control") {
    s.type = ManifoldType::flat_control;
  } else if (name == "rate_control") {
    s.type = ManifoldType::rate_control;
  } else {
    throw UsageError("unknown builtin manifold '" + name + "'");
  }
  return s;
}

ManifoldSpec parse_manifold_json(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("manifold: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("manifold: definition must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "version" && key != "type" && key != "c" && key != "m" && key != "interval" && key != "component") {
      throw UsageError("manifold: unknown key '" + key + "'");
    }
  }
  ManifoldSpec s;
  s.name = "file";
  if (j.contains("version")) {
    if (!j["version"].is_number_integer() || j["version"].get<int>() != 1) {
      throw UsageError("manifold.version: only version 1 is supported");
    }
  }
  if (!j.contains("type") || !j["type"].is_string()) throw UsageError("manifold.type: required string");
  const std::string type = j["type"].get<std::string>();
  if (type == "example_r5") {
    s.type = ManifoldType::example_r5;
  } else if (type == "warped_product") {
    s.type = ManifoldType::warped_product;
  } else {
    throw UsageError("manifold.type: expected \"warped_product\" or \"example_r5\", got \"" + type + "\"");
  }
  if (j.contains("c")) {
    if (!j["c"].is_number()) throw UsageError("manifold.c: expected a number");
    s.c = j["c"].get<double>();
  }
  if (j.contains("m")) {
    if (!j["m"].is_number_integer()) throw UsageError("manifold.m: expected an integer");
    s.m = j["m"].get<int>();
  }
  if (j.contains("interval")) {
    const json& iv = j["interval"];
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number()) {
      throw UsageError("manifold.interval: expected [t_min, t_max]");
    }
    s.t_min = iv[0].get<double>();
    s.t_max = iv[1].get<double>();
  }
  if (j.contains("component")) {
    const json& c = j["component"];
    if (c == "positive") {
      s.component = ChartComponent::positive;
    } else if (c == "negative") {
      s.component = ChartComponent::negative;
    } else {
      throw UsageError("manifold.component: expected \"positive\" or \"negative\"");
    }
  }
  return s;
}

ManifoldSpec load_manifold(const std::string& name_or_path) {
  for (const std::string& n : builtin_manifold_names()) {
    if (n == name_or_path) return builtin_manifold(n);
  }
  std::ifstream f(name_or_path, std::ios::binary);
  if (!f) throw IoError("manifold: '" + name_or_path + "' is neither a builtin nor a readable file");
  std::ostringstream os;
  os << f.rdbuf();
  ManifoldSpec s = parse_manifold_json(os.str());
  s.name = name_or_path;
  return s;
}

ThreeKenmotsuStructure build_manifold(const ManifoldSpec& spec) {
  switch (spec.type) {
    case ManifoldType::example_r5:
      return example_r5(spec.component);
    case ManifoldType::example_r5_tchart:
      return example_r5_tchart(spec.component);
    case ManifoldType::warped_product:
      if (spec.m < 1) throw StructuralError("invalid warped-product spec: m must be at least 1");
      return warped_product(flat_warped_spec(spec.m, spec.c, spec.t_min, spec.t_max));
    case ManifoldType::flat_control:
      return flat_control();
    case ManifoldType::rate_control:
      return rate_control();
  }
  throw UsageError("unknown manifold type");
}

const std::vector<std::pair<std::string, double>>& suite_checks() {
  static const std::vector<std::pair<std::string, double>> checks = {
      {"contact.axioms.phi1", 1e-10},
      {"contact.axioms.phi2", 1e-10},
      {"contact.axioms.phi3", 1e-10},
      {"kenmotsu.eq1.phi1", 1e-10},
      {"kenmotsu.eq1.phi2", 1e-10},
      {"kenmotsu.eq1.phi3", 1e-10},
      {"kenmotsu.eq2", 1e-10},
      {"forms.identities.phi1", 1e-10},
      {"forms.identities.phi2", 1e-10},
      {"forms.identities.phi3", 1e-10},
      {"triple.relations", 1e-10},
      {"triple.anticommute", 1e-10},
      {"thm.compose_third", 1e-10},
      {"lemma.xig", 1e-10},
      {"thm.lc_components", 1e-9},
      {"gauss.h_form", 1e-10},
      {"gauss.relations", 1e-8},
      {"thm.einstein", 1e-9},
      {"thm.ricci_parallel", 1e-5},
      {"thm.h_sum", 1e-9},
      {"curvature.phi_identity", 1e-9},
      {"volume.nondegenerate", 0.5},
  };
  return checks;
}

void validate_config(const SuiteConfig& config) {
  if (config.n_points < 1) throw UsageError("n_points: must be at least 1");
  if (config.n_vectors < 1) throw UsageError("n_vectors_per_point: must be at least 1");
  for (const auto& [id, tol] : config.tolerances) {
    bool known = false;
    for (const auto& c : suite_checks()) known = known || c.first == id;
    if (!known) throw UsageError("tolerance override: unknown check id '" + id + "'");
    if (!(tol > 0.0) || !std::isfinite(tol)) throw UsageError("tolerance override '" + id + "': must be positive");
  }
}

namespace {

CheckReport failed(const std::string& id, double tol, const SampleSet* samples, const std::string& why) {
  CheckReport r;
  r.id = id;
  r.anchor = id == "construct" ? "structure construction" : "";
  r.tolerance = tol;
  r.max_residual = std::numeric_limits<double>::infinity();
  if (samples) {
    r.points = samples->points.size();
    r.vectors = samples->vectors_per_point();
    r.seed = samples->seed;
  }
  r.note = why;
  r.decide();
  return r;
}

}  // namespace

std::vector<CheckReport> run_suite(const SuiteConfig& config) {
  validate_config(config);
  auto tol_of = [&](const std::string& id) {
    const auto it = config.tolerances.find(id);
    if (it != config.tolerances.end()) return it->second;
    for (const auto& c : suite_checks()) {
      if (c.first == id) return c.second;
    }
    throw UsageError("no default tolerance for '" + id + "'");
  };

  std::vector<CheckReport> out;
  std::optional<ThreeKenmotsuStructure> built;
  try {
    built.emplace(build_manifold(config.manifold));
  } catch (const StructuralError& e) {
    CheckReport r = failed("construct", 0.0, nullptr, e.what());
    r.seed = config.seed;
    out.push_back(std::move(r));
    return out;
  }
  const ThreeKenmotsuStructure& t = *built;
  const SampleSet samples = sample(t.chart(), config.n_points, config.n_vectors, config.seed);
  const Execution exec = config.exec;

  auto run = [&](const std::string& id, const std::function<CheckReport(double)>& fn) {
    const double tol = tol_of(id);
    try {
      CheckReport r = fn(tol);
      r.id = id;
      out.push_back(std::move(r));
    } catch (const Error& e) {
      out.push_back(failed(id, tol, &samples, e.what()));
    }
  };

  for (int a = 1; a <= 3; ++a) {
    run("contact.axioms.phi" + std::to_string(a),
        [&](double tol) { return check_almost_contact(t.structure(a), samples, tol, exec); });
  }
  for (int a = 1; a <= 3; ++a) {
    run("kenmotsu.eq1.phi" + std::to_string(a),
        [&](double tol) { return check_kenmotsu(t.structure(a), samples, tol, exec); });
  }
  run("kenmotsu.eq2", [&](double tol) { return check_reeb_identities(t.structure(1), samples, tol, exec); });
  for (int a = 1; a <= 3; ++a) {
    run("forms.identities.phi" + std::to_string(a),
        [&](double tol) { return check_form_identities(t.structure(a), samples, tol, exec); });
  }
  run("triple.relations", [&](double tol) { return verify_triple(t, samples, tol, exec); });
  run("triple.anticommute", [&](double tol) { return check_anticommutativity(t, samples, tol, exec); });
  run("thm.compose_third", [&](double tol) { return check_compose_round_trip(t, samples, tol, exec); });

  bool adapted = true;
  try {
    (void)adapted_frame(t.structure(1), samples);
  } catch (const NotAdaptedError&) {
    adapted = false;
  }
  if (adapted) {
    run("lemma.xig", [&](double tol) { return check_xig_lemma(t.structure(1), samples, tol, exec); });
    run("thm.lc_components", [&](double tol) { return check_lc_components(t.structure(1), samples, tol, exec); });
  }
  run("gauss.h_form", [&](double tol) { return check_second_fundamental_form(t, samples, tol, exec); });
  if (t.warped_source()) {
    run("gauss.relations", [&](double tol) { return check_gauss_relations(t, samples, tol, exec); });
  }
  run("thm.einstein", [&](double tol) { return check_einstein(t, samples, tol, exec); });
  run("thm.ricci_parallel", [&](double tol) {
    CheckReport r = check_ricci_parallel(t, samples, tol, exec);
    r.note = "dimension " + std::to_string(t.dim()) + "; relative defect";
    return r;
  });
  run("thm.h_sum", [&](double tol) { return check_h_sum(t, samples, tol, exec); });
  run("curvature.phi_identity", [&](double tol) { return check_phi_curvature(t, samples, tol, exec); });
  run("volume.nondegenerate", [&](double tol) { return check_volume(t, samples, tol, exec); });
  return out;
}

bool all_pass(const std::vector<CheckReport>& reports) {
  for (const CheckReport& r : reports) {
    if (!r.pass) return false;
  }
  return true;
}

}  // namespace klab
