#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "klab/errors.hpp"
#include "klab/suite.hpp"

namespace {

std::map<std::string, double> parse_tolerances(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw klab::UsageError("--tol expects <id>=<value>, got '" + item + "'");
    const std::string id = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      std::size_t used = 0;
      const double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      out[id] = v;
    } catch (const std::exception&) {
      throw klab::UsageError("--tol " + id + ": '" + value + "' is not a number");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verifier for Kenmotsu and 3-Kenmotsu structures"};
  app.require_subcommand(1);
  CLI::App* verify = app.add_subcommand("verify", "Run the check suite on a manifold");

  std::string manifold = "example_r5";
  int points = 100;
  int vectors = 8;
  std::uint64_t seed = 0;
  std::vector<std::string> tols;
  std::string format = "json";
  std::string out = "-";
  bool serial = false;

  verify->add_option("--manifold", manifold, "Builtin name or path to a manifold definition file")
      ->envname("KLAB_MANIFOLD")
      ->capture_default_str();
  verify->add_option("--points", points, "Number of sample points")->envname("KLAB_POINTS")->capture_default_str();
  verify->add_option("--vectors", vectors, "Random directions per point")
      ->envname("KLAB_VECTORS")
      ->capture_default_str();
  verify->add_option("--seed", seed, "Sampling seed")->envname("KLAB_SEED")->capture_default_str();
  verify->add_option("--tol", tols, "Tolerance override <id>=<value>, repeatable")
      ->envname("KLAB_TOL")
      ->delimiter(',');
  verify->add_option("--format", format, "json or table")->envname("KLAB_FORMAT")->capture_default_str();
  verify->add_option("--out", out, "Output path, - for stdout")->envname("KLAB_OUT")->capture_default_str();
  verify->add_flag("--serial", serial, "Evaluate points on one thread")->envname("KLAB_SERIAL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    klab::SuiteConfig config;
    config.manifold = klab::load_manifold(manifold);
    config.n_points = points;
    config.n_vectors = vectors;
    config.seed = seed;
    config.tolerances = parse_tolerances(tols);
    config.format = klab::parse_format(format);
    config.out = out;
    config.exec = serial ? klab::Execution::serial : klab::Execution::parallel;
    const std::vector<klab::CheckReport> reports = klab::run_suite(config);
    klab::emit_report(reports, config.format, config.out);
    return klab::all_pass(reports) ? 0 : 1;
  } catch (const klab::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const klab::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 2;
  } catch (const klab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
