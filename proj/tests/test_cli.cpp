#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli_app.hpp"
#include "udw/entanglement.hpp"
#include "udw/markovian.hpp"

using namespace udw;
using namespace udw::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("udw_cli_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> v;
  std::stringstream ss(line);
  for (std::string f; std::getline(ss, f, ',');) v.push_back(f);
  return v;
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream f(p);
  std::vector<std::string> v;
  for (std::string l; std::getline(f, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST_CASE("csv header layout") {
  const auto c = csv_columns(false);
  REQUIRE(c.size() == 34);
  CHECK(c[0] == "tau");
  CHECK(c[1] == "g2atau");
  CHECK(c[2] == "rho_re_11");
  CHECK(c[3] == "rho_im_11");
  CHECK(c[33] == "rho_im_44");
  CHECK(csv_columns(true).back() == "negativity");
}

TEST_CASE("config round-trips through JSON") {
  ScenarioConfig c;
  c.params = Params{0.02, 1.5, 0.03, 0.4, 0.005};
  c.initial_state = "bell-phi-plus";
  c.solvers = {SolverTag::markov, SolverTag::markov_rwa};
  c.samples = 17;
  c.negativity = true;
  c.enforce_validity = true;
  c.validity_threshold = 0.2;
  c.prefix = "x";
  CHECK(config_from_json(nlohmann::json::parse(to_json(c).dump())) == c);

  ScenarioConfig d = c;
  d.initial_state = "custom";
  d.custom_state = states::bell_phi_plus().matrix() * cd(0.5) + states::ground().matrix() * cd(0.5);
  CHECK(config_from_json(nlohmann::json::parse(to_json(d).dump())) == d);

  nlohmann::json bad = nlohmann::json::parse(to_json(c).dump());
  bad["schema"] = 2;
  CHECK_THROWS(config_from_json(bad));
}

TEST_CASE("missing parameters are usage errors naming the field") {
  const Run r = run({"evolve", "--g", "0.01", "--a", "1", "--omega", "0.01"});
  CHECK(r.code == exit_usage);
  CHECK(r.err.find("L: required") != std::string::npos);
  CHECK(run({"evolve", "--g", "0.01", "--a", "1", "--omega", "0.01", "--aL", "2", "--L", "2"}).code == exit_usage);
  CHECK(run({"evolve", "--g", "-1", "--a", "1", "--omega", "0.01", "--aL", "2"}).code == exit_usage);
  CHECK(run({"nonsense"}).code == exit_usage);
  CHECK(run({}).code == exit_usage);
  CHECK(run({"evolve", "--preset", "fig1", "--solvers", "bogus"}).code == exit_usage);
}

TEST_CASE("constants report null cross terms at L = 0") {
  Run r = run({"constants", "--g", "0.01", "--a", "1", "--omega", "0.01", "--L", "0"});
  REQUIRE(r.code == exit_ok);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["constants"]["c_x"].is_null());
  CHECK(j["constants"]["c_s"].get<double>() > 0);
  CHECK_FALSE(j["notes"].empty());

  r = run({"constants", "--preset", "fig3"});
  REQUIRE(r.code == exit_ok);
  j = nlohmann::json::parse(r.out);
  const auto c = correlators::constants(Params{0.01, 1.0, 0.01, 2.0, 0.01});
  CHECK(j["constants"]["k_x"].get<double>() == c.k_x);
  CHECK(j["constants"]["s_x_prime"].get<double>() == c.s_x_prime);
}

TEST_CASE("evolve writes schema-1 CSVs matching the library") {
  const fs::path dir = scratch("evolve");
  const Run r = run({"evolve", "--preset", "fig3", "--samples", "21", "--out-dir", dir.string(), "--prefix", "t"});
  REQUIRE(r.code == exit_ok);
  for (const char* solver : {"markov", "markov-rwa"}) {
    const auto ls = lines(dir / (std::string("t_") + solver + ".csv"));
    REQUIRE(ls.size() == 23);
    CHECK(ls[0] == "# schema=1");
    const auto header = split(ls[1]);
    CHECK(header == csv_columns(true));
    const Params p{0.01, 1.0, 0.01, 2.0, 0.01};
    std::vector<double> taus;
    for (int k = 0; k < 21; ++k) taus.push_back(20.0 / (p.g * p.g) * k / 20);
    const TimeSeries ts =
        markovian::evolve(p, states::bell_phi_plus(), taus, std::string(solver) == "markov-rwa");
    for (int k = 0; k < 21; ++k) {
      const auto f = split(ls[k + 2]);
      REQUIRE(f.size() == 35);
      CHECK(std::stod(f[0]) == doctest::Approx(taus[k]).epsilon(1e-15));
      CHECK(std::stod(f[1]) == doctest::Approx(20.0 * k / 20).epsilon(1e-14));
      double tr = 0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          const cd v(std::stod(f[2 + 2 * (4 * i + j)]), std::stod(f[3 + 2 * (4 * i + j)]));
          CHECK(std::abs(v - ts.states[k](i, j)) <= 1e-15);
          if (i == j) tr += v.real();
        }
      CHECK(tr == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::stod(f[34]) == doctest::Approx(entanglement::negativity(ts.states[k])).epsilon(1e-12));
    }
  }
  CHECK_FALSE(fs::exists(dir / "t_markov.csv.tmp"));
}

TEST_CASE("nonmarkov horizon limit and short run") {
  const fs::path dir = scratch("nz");
  CHECK(run({"evolve", "--preset", "fig1", "--solvers", "nonmarkov", "--out-dir", dir.string()}).code == exit_usage);

  const Run r = run({"evolve", "--g", "0.01", "--a", "1", "--omega", "0.01", "--aL", "2", "--solvers",
                     "markov,nonmarkov", "--g2at-max", "0.002", "--samples", "5", "--out-dir", dir.string()});
  REQUIRE(r.code == exit_ok);
  const auto m = lines(dir / "run_markov.csv");
  const auto n = lines(dir / "run_nonmarkov.csv");
  REQUIRE(m.size() == 7);
  REQUIRE(n.size() == 7);
  for (int k = 2; k < 7; ++k) {
    const auto a = split(m[k]), b = split(n[k]);
    CHECK(a[0] == b[0]);
    for (std::size_t c = 2; c < a.size(); ++c) CHECK(std::abs(std::stod(a[c]) - std::stod(b[c])) <= 5e-4);
  }
}

TEST_CASE("validity subcommand and enforcement") {
  Run r = run({"validity", "--g", "0.01", "--a", "1", "--omega", "0.01", "--aL", "2"});
  REQUIRE(r.code == exit_ok);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["overall"].get<bool>());

  r = run({"validity", "--g", "0.01", "--a", "1", "--omega", "2", "--aL", "2", "--enforce-validity"});
  CHECK(r.code == exit_validity);
  CHECK(r.err.find("pi*omega/a") != std::string::npos);

  const fs::path dir = scratch("evolve_enforce");
  r = run({"evolve", "--g", "0.01", "--a", "1", "--omega", "2", "--aL", "2", "--enforce-validity", "--out-dir",
           dir.string()});
  CHECK(r.code == exit_validity);
  CHECK_FALSE(fs::exists(dir / "run_markov.csv"));

  r = run({"validity", "--preset", "deep", "--threshold", "0"});
  CHECK(r.code == exit_usage);
}

TEST_CASE("validity sweep grid") {
  const Run r = run({"validity", "--g", "0.01", "--a", "1", "--omega", "0.01", "--aL", "2", "--sweep",
                     "omega_a:1e-2:1:3:log", "--sweep", "aL:2:4:2"});
  REQUIRE(r.code == exit_ok);
  std::stringstream ss(r.out);
  std::vector<std::string> ls;
  for (std::string l; std::getline(ss, l);) ls.push_back(l);
  REQUIRE(ls.size() == 2 + 6);
  CHECK(ls[0] == "# schema=1");
  CHECK(ls[1].rfind("g,omega_a,aL,aeps", 0) == 0);
  CHECK(split(ls[2]).back() == "1");      // omega/a = 0.01, aL = 2
  CHECK(split(ls.back()).back() == "0");  // omega/a = 1 fails
  CHECK(run({"validity", "--preset", "deep", "--sweep", "bogus:0:1:3"}).code == exit_usage);
  CHECK(run({"validity", "--preset", "deep", "--sweep", "g:0:1:0"}).code == exit_usage);
}

TEST_CASE("compare writes the deviation CSV and summary") {
  const fs::path dir = scratch("compare");
  const Run r = run({"compare", "--preset", "fig1", "--samples", "101", "--out-dir", dir.string()});
  REQUIRE(r.code == exit_ok);
  const auto ls = lines(dir / "fig1_compare.csv");
  REQUIRE(ls.size() == 103);
  CHECK(ls[0] == "# schema=1");
  std::ifstream f(dir / "fig1_compare.summary.json");
  const auto j = nlohmann::json::parse(f);
  CHECK(j["reference"] == "markov");
  CHECK(j["comparisons"][0]["solver"] == "markov-rwa");
  CHECK(j["comparisons"][0]["max_abs_deviation"].get<double>() > 0);
}

TEST_CASE("dump-config output reloads to the same scenario") {
  const fs::path dir = scratch("config");
  Run r = run({"evolve", "--preset", "fig2", "--samples", "11", "--out-dir", dir.string(), "--dump-config"});
  REQUIRE(r.code == exit_ok);
  const fs::path cfg = dir / "c.json";
  std::ofstream(cfg) << r.out;
  const ScenarioConfig c = config_from_json(nlohmann::json::parse(r.out));
  CHECK(c.initial_state == "down-up");
  CHECK(c.samples == 11);
  r = run({"evolve", "--config", cfg.string(), "--dump-config"});
  REQUIRE(r.code == exit_ok);
  CHECK(config_from_json(nlohmann::json::parse(r.out)) == c);
  r = run({"evolve", "--config", cfg.string()});
  CHECK(r.code == exit_ok);
  CHECK(fs::exists(dir / "fig2_markov.csv"));
  CHECK(run({"evolve", "--config", (dir / "missing.json").string()}).code == exit_usage);
}
