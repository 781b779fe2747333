#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

int run(const std::string& args) {
  const std::string cmd = std::string(FINSLER_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "finsler_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("constants: valid range exits 0, violated range exits 2") {
  CHECK(run("constants --family sobolev --N 3 --p 2 --norm euclidean") == 0);
  CHECK(run("constants --family gn --N 3 --q 2") == 0);
  CHECK(run("constants --family sobolev --N 3 --p 3.5") == 2);
}

TEST_CASE("constants: JSON output carries theta") {
  const auto out = scratch("gn.json");
  REQUIRE(run("constants --family gn --N 3 --q 2 --format json --out " + out.string()) == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j.dump().find("theta") != std::string::npos);
}

TEST_CASE("verify: extremal passes, cutoff passes, bad range exits 2") {
  const auto out = scratch("verify.json");
  REQUIRE(run("verify --family sobolev --extremal a=1,b=1 --N 3 --p 2 --R 1 --norm euclidean --out " +
              out.string()) == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(std::abs(j.at("report").at("relative_deficit").get<double>()) <= 1e-6);
  CHECK(run("verify --family sobolev --profile linear-cutoff") == 0);
  CHECK(run("verify --family trace --N 3 --p 2") == 2);
  CHECK(run("verify --family nosuch") == 2);
}

TEST_CASE("suite: missing config exits 2") {
  CHECK(run("suite --config /nonexistent/config.json") == 2);
}

TEST_CASE("suite: tightened tolerances fail cleanly and are deterministic") {
  const auto cfg = scratch("tight.json");
  {
    std::ofstream o(cfg);
    o << R"({"schema_version": 1, "criteria": [6], "tolerances": {"extremal": 1e-14}})";
  }
  const auto out = scratch("tight_out.json");
  CHECK(run("suite --config " + cfg.string() + " --out " + out.string()) == 1);
  REQUIRE(fs::exists(out));
  const std::string first = slurp(out);
  CHECK(run("suite --config " + cfg.string() + " --out " + out.string()) == 1);
  CHECK(slurp(out) == first);
}

TEST_CASE("suite: a passing subset exits 0") {
  const auto cfg = scratch("quick.json");
  {
    std::ofstream o(cfg);
    o << R"({"schema_version": 1, "criteria": [1, 2, 9]})";
  }
  CHECK(run("suite --config " + cfg.string() + " --out " + scratch("quick_out.json").string()) == 0);
}

TEST_CASE("plotdata: weight and extremal spot values") {
  const auto out = scratch("plot.csv");
  REQUIRE(run("plotdata --map interior --N 3 --p 2 --R 1 --family sobolev --extremal a=1,b=1 --out " +
              out.string()) == 0);
  std::istringstream in(slurp(out));
  std::string line;
  std::getline(in, line);  // header
  double prev = -1.0;
  bool saw_half = false;
  while (std::getline(in, line)) {
    double s = 0, v = 0, w = 0;
    char c1 = 0, c2 = 0;
    std::istringstream row(line);
    row >> s >> c1 >> v >> c2 >> w;
    CHECK(s > prev);
    CHECK(s < 1.0);
    prev = s;
    if (s == 0.5) {
      saw_half = true;
      CHECK(w == doctest::Approx(16.0).epsilon(1e-12));
      CHECK(v == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-12));
    }
  }
  CHECK(saw_half);
  CHECK(run("plotdata --map interior --N 3 --p 3") == 2);
}
