#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "hopfsym/io.hpp"
#include "hopfsym/shapes.hpp"

using namespace hopfsym;
namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "hopfsym_test_cli";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = "cd '" + workdir().string() + "' && " + env + " '" + HOPFSYM_CLI_PATH + "' " + args +
                          " > last.out 2> last.err";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

io::json report(const std::string& rel) { return io::json::parse(io::read_file(workdir() / rel)); }

void write(const std::string& rel, const std::string& text) { io::write_atomic(workdir() / rel, text); }

}  // namespace

TEST_CASE("cli: sweep of a circle reports its centre level", "[cli]") {
  write("circle.csv", io::curve_csv(shapes::circle(2048, 1.0, 0.0, 0.5)));
  REQUIRE(run("sweep --input circle.csv --out o1") == 0);
  const auto j = report("o1/sweep.json");
  CHECK(j["pass"] == true);
  const double lambda0 = j["result"]["sweep"]["lambda0"];
  const double step = j["result"]["sweep"]["grid_step"];
  CHECK(std::abs(lambda0 - 0.5) <= 2 * step);
  CHECK_FALSE(fs::exists(workdir() / "o1/sweep.json.tmp"));
}

TEST_CASE("cli: exit codes for pass, fail and usage errors", "[cli]") {
  REQUIRE(run("gallery --name example-1.1 --csv --out g") == 0);
  const std::string uv = "--u g/gallery-example-1.1-u.csv --v g/gallery-example-1.1-v.csv";
  CHECK(run("verify-lemma --lemma hypothesis " + uv + " --out o2") == 0);
  CHECK(run("verify-lemma --lemma comparison " + uv + " --out o2") == 1);
  CHECK(run("verify-lemma --lemma comparison " + uv + " --expect fail --out o2") == 0);
  CHECK(run("verify-lemma --lemma nonsense " + uv + " --out o2") == 2);
  CHECK(run("verify-lemma --lemma comparison --u missing.csv --v missing.csv --out o2") == 2);
  CHECK(run("sweep --out o2") == 2);
  CHECK(run("") == 2);
  CHECK(run("reconstruct --f wobble:1 --out o2") == 2);
  CHECK(run("gallery --name nope --out o2") == 2);
}

TEST_CASE("cli: counterexample report", "[cli]") {
  REQUIRE(run("counterexample --epsilon 0.1 --out o3") == 0);
  const auto j = report("o3/counterexample.json");
  CHECK(j["result"]["holds"] == true);
  CHECK(j["result"]["min_margin"].get<double>() > 0);
  CHECK(j["result"]["ratio_check"] == true);
}

TEST_CASE("cli: reconstruct t^3 from f = 6 rho^(1/3)", "[cli]") {
  REQUIRE(run("reconstruct --f power:6:1/3 --csv --out o4") == 0);
  const auto u = io::load_function(workdir() / "o4/reconstruct-solution.csv");
  double worst = 0;
  for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(u[i] - std::pow(u.node(i), 3)));
  CHECK(worst <= 1e-6);
}

TEST_CASE("cli: deterministic reports are byte-identical", "[cli]") {
  write("circle2.csv", io::curve_csv(shapes::circle(1024)));
  REQUIRE(run("sweep --input circle2.csv --deterministic --out d1") == 0);
  REQUIRE(run("sweep --input circle2.csv --deterministic --out d2") == 0);
  CHECK(io::read_file(workdir() / "d1/sweep.json") == io::read_file(workdir() / "d2/sweep.json"));
  REQUIRE(run("sweep --input circle2.csv --out d3") == 0);
  CHECK(report("d3/sweep.json").contains("metadata"));
  CHECK_FALSE(report("d1/sweep.json").contains("metadata"));
}

TEST_CASE("cli: output directory from the environment", "[cli]") {
  REQUIRE(run("gallery --name fig11", "HOPFSYM_OUT=envout") == 0);
  CHECK(fs::exists(workdir() / "envout/gallery-fig11.json"));
}

TEST_CASE("cli: JSON config mirrors the flags and rejects unknown keys", "[cli]") {
  write("circle3.csv", io::curve_csv(shapes::circle(1024, 1.0, 0.0, -2.0)));
  write("run.json", R"({"command": "sweep", "input": "circle3.csv", "axis": "x2", "out": "cfg", "deterministic": true})");
  REQUIRE(run("--config run.json") == 0);
  const auto j = report("cfg/sweep.json");
  CHECK(std::abs(j["result"]["sweep"]["lambda0"].get<double>() + 2.0) <= 0.01);
  write("bad.json", R"({"command": "sweep", "input": "circle3.csv", "colour": "red"})");
  CHECK(run("--config bad.json") == 2);
  write("neg.json", R"({"command": "verify-lemma", "lemma": "plateau", "u": "x.csv", "tolerance": -1})");
  CHECK(run("--config neg.json") == 2);
}

TEST_CASE("cli: suite runs a subset of the acceptance checks", "[cli]") {
  CHECK(run("suite --criteria 6,8 --out s") == 0);
  const auto j = report("s/suite.json");
  CHECK(j["result"]["ran"] == 2);
  CHECK(j["result"]["failed"] == 0);
  CHECK(run("suite --out s") == 2);
}
