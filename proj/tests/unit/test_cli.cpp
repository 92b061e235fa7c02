// End-to-end checks of the wcalc binary: spawned as a subprocess, outputs
// parsed back as JSON. WCALC_BIN is injected by the build.
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wcalc/io.hpp"
#include "wcalc/measure.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

RunResult run_raw(const std::string& command) {
  const fs::path dir = fs::temp_directory_path() / "wcalc_cli_io";
  fs::create_directories(dir);
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = command + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  r.out = wcalc::read_file(out.string());
  r.err = wcalc::read_file(err.string());
  return r;
}

RunResult run_cli(const std::string& args) {
  return run_raw(std::string(WCALC_BIN) + " " + args);
}

fs::path sandbox() {
  const fs::path dir = fs::temp_directory_path() / "wcalc_cli_fixtures";
  fs::create_directories(dir);
  return dir;
}

std::string write_fixture(const std::string& name, const std::string& content) {
  const fs::path p = sandbox() / name;
  wcalc::write_file(p.string(), content);
  return p.string();
}

std::string circle_csv(int intervals) {
  std::string csv = "t,atom,x0,x1,v0,v1\n";
  for (int k = 0; k <= intervals; ++k) {
    const double t = 2.0 * std::numbers::pi * k / intervals;
    csv += wcalc::format_double(t) + ",0," + wcalc::format_double(std::cos(t)) + "," +
           wcalc::format_double(std::sin(t)) + "," + wcalc::format_double(-std::sin(t)) +
           "," + wcalc::format_double(std::cos(t)) + "\n";
  }
  return csv;
}

}  // namespace

TEST_CASE("dist mirrors the dirac example") {
  const std::string a = write_fixture("a.json", R"({"dimension": 2, "atoms": [[0, 0]], "weights": [1.0]})");
  const std::string b = write_fixture("b.json", R"({"dimension": 2, "atoms": [[3, 4]], "weights": [1.0]})");
  const RunResult r = run_cli("dist " + a + " " + b);
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["w2"].get<double>() == doctest::Approx(5.0));
  CHECK(j["inputs"]["a"].contains("digest"));
  CHECK(j["params"].contains("dual_feasibility_slack"));

  // Byte-identical output on identical inputs and flags.
  const RunResult again = run_cli("dist " + a + " " + b);
  CHECK(again.out == r.out);
}

TEST_CASE("plan emits the coupling and its dual value") {
  const std::string a = write_fixture(
      "pair_a.json", R"({"dimension": 1, "atoms": [[0], [2]], "weights": [0.5, 0.5]})");
  const std::string b = write_fixture(
      "pair_b.json", R"({"dimension": 1, "atoms": [[1], [3]], "weights": [0.5, 0.5]})");
  const RunResult r = run_cli("plan " + a + " " + b);
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["cost"].get<double>() == doctest::Approx(1.0));
  CHECK(j["dual_value"].get<double>() == doctest::Approx(1.0));
  CHECK(j["gamma"][0][0].get<double>() == doctest::Approx(0.5));
  CHECK(j["gamma"][0][1].get<double>() == doctest::Approx(0.0));
}

TEST_CASE("validation failures exit 2 with machine-readable errors") {
  const std::string bad = write_fixture(
      "bad.json", R"({"dimension": 1, "atoms": [[0], [1]], "weights": [0.5, 0.6]})");
  const std::string good = write_fixture("good.json", R"({"dimension": 1, "atoms": [[0]], "weights": [1]})");
  const RunResult r = run_cli("dist " + bad + " " + good);
  CHECK(r.exit_code == 2);
  const json err = json::parse(r.err);
  CHECK(err["error"].get<std::string>() == "WeightSumOutOfRange");

  const RunResult missing = run_cli("dist /nonexistent.json " + good);
  CHECK(missing.exit_code == 2);
}

TEST_CASE("numerical failures exit 3") {
  const std::string circle = write_fixture("circle_loop.csv", circle_csv(128));
  const RunResult r = run_cli("loop --form rotational --curve " + circle);
  CHECK(r.exit_code == 3);
  const json err = json::parse(r.err);
  CHECK(err["error"].get<std::string>() == "NotClosedForm");

  const std::string mu = write_fixture(
      "pot_mu.json", R"({"dimension": 2, "atoms": [[1, 0], [0, 1]], "weights": [0.5, 0.5]})");
  const RunResult shear = run_cli("potential --form shear --measure " + mu);
  CHECK(shear.exit_code == 3);
  CHECK(json::parse(shear.err)["error"].get<std::string>() == "NotClosedForm");
}

TEST_CASE("grid mismatches are validation failures") {
  const std::string circle = write_fixture("circle_odd.csv", circle_csv(100));
  const RunResult r =
      run_cli("green --form rotational --curve " + circle + " --r 0.1 --grid 128x64");
  CHECK(r.exit_code == 2);
  CHECK(json::parse(r.err)["error"].get<std::string>() == "InvalidArgument");
}

TEST_CASE("green prints both integrals and the refinement table") {
  const std::string circle = write_fixture("circle.csv", circle_csv(512));
  const RunResult r =
      run_cli("green --form rotational --curve " + circle + " --r 0.1 --grid 128x64");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(std::abs(j["residual"].get<double>()) < 1e-6);
  CHECK(j["surface_integral"].get<double>() ==
        doctest::Approx(-2.0 * std::numbers::pi * 0.99).epsilon(1e-9));
  CHECK(j["refinement"].size() == 3);

  const RunResult gradient =
      run_cli("green --form gradient:quadratic --curve " + circle + " --r 0.1 --grid 128x64");
  REQUIRE(gradient.exit_code == 0);
  CHECK(std::abs(json::parse(gradient.out)["residual"].get<double>()) < 1e-6);
}

TEST_CASE("integrate, loop, and potential agree on an exact form") {
  const std::string circle = write_fixture("circle2.csv", circle_csv(256));
  const RunResult li = run_cli("integrate --form gradient:quadratic --curve " + circle);
  REQUIRE(li.exit_code == 0);
  CHECK(std::abs(json::parse(li.out)["integral"].get<double>()) < 1e-10);

  const RunResult lp = run_cli("loop --form gradient:quadratic --curve " + circle);
  REQUIRE(lp.exit_code == 0);
  const json loop = json::parse(lp.out);
  CHECK(std::abs(loop["integral"].get<double>()) < 1e-8);
  CHECK(loop["edges"].size() == 3);

  const std::string mu = write_fixture(
      "mu.json", R"({"dimension": 2, "atoms": [[1, 0], [0, 2]], "weights": [0.5, 0.5]})");
  const RunResult pot = run_cli("potential --form gradient:quadratic --measure " + mu);
  REQUIRE(pot.exit_code == 0);
  // F = int |x|^2/2 dmu - 0 = (1 + 4)/4.
  CHECK(json::parse(pot.out)["potential"].get<double>() == doctest::Approx(1.25).epsilon(1e-7));
}

TEST_CASE("velocity subcommand fills in velocity columns") {
  std::string csv = "t,atom,x0,x1\n";
  for (int k = 0; k <= 32; ++k) {
    const double t = k / 32.0;
    csv += wcalc::format_double(t) + ",0," + wcalc::format_double(t * t) + ",1\n";
  }
  const std::string in = write_fixture("traj.csv", csv);
  const std::string out = (sandbox() / "traj_v.csv").string();
  const RunResult r = run_cli("velocity --curve " + in + " --out " + out);
  REQUIRE(r.exit_code == 0);
  const wcalc::MeasureCurve curve = wcalc::read_curve_csv(out);
  REQUIRE(curve.has_velocities());
  // d/dt t^2 = 2t at the interior samples.
  CHECK(curve.velocity(16)[0](0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("WF_THREADS caps workers without changing results") {
  const std::string circle = write_fixture("circle3.csv", circle_csv(512));
  const std::string args = "green --form swirl --curve " + circle + " --r 0.2 --grid 64x32";
  const RunResult one = run_raw("env WF_THREADS=1 " + std::string(WCALC_BIN) + " " + args);
  const RunResult four = run_raw("env WF_THREADS=4 " + std::string(WCALC_BIN) + " " + args);
  REQUIRE(one.exit_code == 0);
  REQUIRE(four.exit_code == 0);
  // The reduction is pairwise over a buffer indexed by grid node, so the
  // worker count cannot change a single bit (of the numbers; the echoed
  // thread cap differs).
  const json ja = json::parse(one.out);
  const json jb = json::parse(four.out);
  CHECK(ja["surface_integral"] == jb["surface_integral"]);
  CHECK(ja["boundary_integral"] == jb["boundary_integral"]);
  CHECK(ja["residual"] == jb["residual"]);
}

TEST_CASE("flow reproduces the oscillator quarter turn") {
  const std::string mu = write_fixture("start.json",
                                       R"({"dimension": 2, "atoms": [[1, 0]], "weights": [1]})");
  const std::string traj = (sandbox() / "flow.csv").string();
  const RunResult r = run_cli("flow --hamiltonian oscillator --measure " + mu +
                              " --T 1.5707963 --dt 1e-4 --stride 100 --out " + traj);
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["final_atoms"][0][0].get<double>() == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(j["final_atoms"][0][1].get<double>() == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(j["energy_drift"].get<double>() < 1e-12);
  CHECK(fs::exists(traj));
}
