#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "klab/errors.hpp"
#include "klab/suite.hpp"

using namespace klab;
namespace fs = std::filesystem;

namespace {

SuiteConfig small(std::uint64_t seed = 3) {
  SuiteConfig c;
  c.n_points = 20;
  c.n_vectors = 3;
  c.seed = seed;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(KLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "klab_test_suite";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("suite output is deterministic and independent of scheduling") {
  SuiteConfig a = small();
  const std::string first = to_json_string(run_suite(a));
  CHECK(first == to_json_string(run_suite(a)));
  a.exec = Execution::serial;
  CHECK(first == to_json_string(run_suite(a)));
  CHECK(first != to_json_string(run_suite(small(4))));
}

TEST_CASE("suite order and ids") {
  const std::vector<CheckReport> r = run_suite(small());
  std::vector<std::string> ids;
  for (const auto& c : suite_checks()) {
    if (c.first != "lemma.xig" && c.first != "thm.lc_components" && c.first != "gauss.relations") ids.push_back(c.first);
  }
  REQUIRE(r.size() == ids.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(r[i].id == ids[i]);
    CHECK(r[i].points == 20);
    CHECK(r[i].seed == 3);
    CHECK(r[i].pass);
    CHECK_FALSE(r[i].anchor.empty());
  }
  SuiteConfig w = small();
  w.manifold = builtin_manifold("warped_flat");
  CHECK(run_suite(w).size() == suite_checks().size());
}

TEST_CASE("tolerance overrides") {
  SuiteConfig c = small();
  c.tolerances["thm.h_sum"] = 1e-15;
  int failing = 0;
  for (const CheckReport& r : run_suite(c)) {
    if (r.id == "thm.h_sum") {
      CHECK(r.tolerance == 1e-15);
      CHECK(r.max_residual > 0.0);
      CHECK_FALSE(r.pass);
    }
    failing += r.pass ? 0 : 1;
  }
  CHECK(failing == 1);
}

TEST_CASE("config validation") {
  SuiteConfig c = small();
  c.n_points = 0;
  CHECK_THROWS_WITH_AS(run_suite(c), doctest::Contains("n_points"), UsageError);
  c = small();
  c.n_vectors = 0;
  CHECK_THROWS_WITH_AS(run_suite(c), doctest::Contains("n_vectors_per_point"), UsageError);
  c = small();
  c.tolerances["thm.nonexistent"] = 1.0;
  CHECK_THROWS_AS(run_suite(c), UsageError);
  c = small();
  c.tolerances["thm.einstein"] = -1.0;
  CHECK_THROWS_AS(run_suite(c), UsageError);
  c.tolerances["thm.einstein"] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(run_suite(c), UsageError);
}

TEST_CASE("construction failure is a single failed report") {
  SuiteConfig c = small();
  c.manifold.type = ManifoldType::warped_product;
  c.manifold.c = -1.0;
  const std::vector<CheckReport> r = run_suite(c);
  REQUIRE(r.size() == 1);
  CHECK(r[0].id == "construct");
  CHECK_FALSE(r[0].pass);
  CHECK(r[0].note.find("c must be positive") != std::string::npos);
  CHECK_FALSE(all_pass(r));
}

TEST_CASE("report emission") {
  CHECK(to_json_string({}) == "[]\n");
  const std::string header = to_table_string({});
  CHECK(header.rfind("id", 0) == 0);
  CHECK(header.find("verdict") != std::string::npos);
  const std::vector<CheckReport> r = run_suite(small());
  const std::string table = to_table_string(r);
  std::istringstream lines(table);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  std::getline(lines, line);
  CHECK(line.rfind("contact.axioms.phi1", 0) == 0);
  CHECK(line.substr(line.size() - 4) == "PASS");
  CHECK(from_json_string(to_json_string(r)) == r);

  CheckReport bad;
  bad.id = "x";
  bad.max_residual = std::numeric_limits<double>::infinity();
  bad.tolerance = 1.0;
  bad.parts = {{"p", std::numeric_limits<double>::quiet_NaN()}};
  const std::string js = to_json_string({bad});
  CHECK(js.find("\"max_residual\": null") != std::string::npos);
  const CheckReport back = from_json_string(js)[0];
  CHECK(std::isinf(back.max_residual));
  CHECK_THROWS_AS(from_json_string("{}"), UsageError);
  CHECK_THROWS_AS(parse_format("xml"), UsageError);

  const fs::path out = scratch("report.json");
  emit_report(r, ReportFormat::json, out.string());
  CHECK(slurp(out) == to_json_string(r));
  CHECK_THROWS_AS(emit_report(r, ReportFormat::json, "/nonexistent-dir/x/report.json"), IoError);
}

TEST_CASE("command line exit codes") {
  const fs::path out = scratch("cli.json");
  CHECK(run_cli("verify --points 10 --vectors 2 --out " + out.string()) == 0);
  CHECK(slurp(out).find("\"id\": \"thm.h_sum\"") != std::string::npos);
  CHECK(run_cli("verify --points 10 --vectors 2 --serial --format table") == 0);
  CHECK(run_cli("verify --manifold flat_control --points 5 --vectors 2") == 1);
  CHECK(run_cli("verify --points 10 --vectors 2 --tol thm.h_sum=1e-15") == 1);
  CHECK(run_cli("verify --points 10 --vectors 2 --tol thm.h_sum=1e-15,thm.einstein=1") == 1);
  CHECK(run_cli("verify --points 0") == 2);
  CHECK(run_cli("verify --points abc") == 2);
  CHECK(run_cli("verify --tol nonsense") == 2);
  CHECK(run_cli("verify --tol bogus.id=1") == 2);
  CHECK(run_cli("verify --format xml") == 2);
  CHECK(run_cli("verify --manifold /nonexistent.json") == 2);
  CHECK(run_cli("verify --points 5 --out /nonexistent-dir/x.json") == 2);
  CHECK(run_cli("") == 2);
  CHECK(std::system(("KLAB_POINTS=0 " KLAB_CLI_PATH " verify > /dev/null 2>&1")) != 0);
  const int env_status = std::system(("KLAB_POINTS=0 " KLAB_CLI_PATH " verify > /dev/null 2>&1"));
  CHECK(WEXITSTATUS(env_status) == 2);
  const int env_ok = std::system(("KLAB_POINTS=5 KLAB_VECTORS=2 KLAB_SERIAL=1 " KLAB_CLI_PATH " verify > /dev/null 2>&1"));
  CHECK(WEXITSTATUS(env_ok) == 0);

  const fs::path def = scratch("warped.json");
  std::ofstream(def) << R"({"version": 1, "type": "warped_product", "c": 2.0})";
  CHECK(run_cli("verify --points 5 --vectors 2 --manifold " + def.string()) == 0);
  std::ofstream(def) << R"({"version": 1, "type": "warped_product", "c": -2.0})";
  CHECK(run_cli("verify --points 5 --vectors 2 --manifold " + def.string()) == 1);
}
