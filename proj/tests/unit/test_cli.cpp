#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "support.hpp"

using nlohmann::json;
using mssr::testing::network_path;

namespace {

struct Result {
  int status = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string command = std::string(MSSR_CLI) + " " + args + " 2>cli_stderr.txt";
  Result r;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buffer{};
  std::size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) r.out.append(buffer.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("reduce prints orders, conditions and the projected system") {
  const auto r = run("reduce " + network_path("projection_example.net") + " --N 1000");
  REQUIRE(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j["theta0"] == "1");
  CHECK(j["gamma"] == "-1");
  CHECK(j["all_conditions_pass"] == true);
  CHECK(j["dominant"] == json({"r3", "r4", "r5", "r6"}));
  CHECK(j["projected"]["reactions"].size() == 3);
  CHECK(j["projected"]["reactions"][0]["kappa_bar"] == 14.0);
  CHECK(j["projected_network"].get<std::string>().find("kappa=108") != std::string::npos);
}

TEST_CASE("reduced network feeds the cme command") {
  REQUIRE(run("reduce " + network_path("futile.net") + " --N 1000 --out-net futile_reduced.net").status == 0);
  const auto r = run("cme futile_reduced.net --T 100 --init \"S1=2,S4=1\" --cert cert.json");
  REQUIRE(r.status == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "S1,S4,probability");
  double total = 0.0;
  std::string line;
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    total += std::stod(line.substr(line.rfind(',') + 1));
    ++rows;
  }
  CHECK(rows == 41 * 41);
  const auto cert = json::parse(read("cert.json"));
  CHECK(cert["truncation"] == "box M=40");
  CHECK(std::abs(total + cert["leaked_mass"].get<double>() - 1.0) < 1e-9);

  const auto stationary = run("cme futile_reduced.net --stationary --box 30 --cert cert.json");
  CHECK(stationary.status == 0);
  CHECK(json::parse(read("cert.json"))["residual"].get<double>() <= 1e-10);
}

TEST_CASE("cme refuses a multiscale network") {
  CHECK(run("cme " + network_path("futile.net") + " --T 1").status == 1);
}

TEST_CASE("simulate summarizes an ensemble") {
  const auto r = run("simulate " + network_path("futile.net") + " --N 1000 --T 5 --samples 500 --seed 9 --csv hist.csv");
  REQUIRE(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j["system"] == "original");
  CHECK(j["capped"] == 0);
  CHECK(j["histograms"].contains("S1"));
  CHECK(read("hist.csv").rfind("species,value,probability\n", 0) == 0);
  CHECK(run("simulate " + network_path("futile.net") + " --N 1000 --T 5 --samples 500 --seed 9 --csv hist.csv").out == r.out);

  const auto reduced = json::parse(
      run("simulate " + network_path("futile.net") + " --N 1000 --T 5 --samples 200 --reduced --record S1").out);
  CHECK(reduced["system"] == "reduced");
  CHECK(reduced["species"] == json({"S1"}));

  const auto exits = json::parse(
      run("simulate " + network_path("futile.net") + " --N 1000 --T 5 --samples 200 --exit-rho 0.3").out);
  CHECK(exits.contains("exit"));
}

TEST_CASE("converge writes json and csv") {
  const auto r = run("converge " + network_path("futile.net") +
                     " --event \"S1 in {3,4}\" --t 5 --grid 100,1000 --samples 1000 --seed 7 --out conv.json --csv conv.csv");
  REQUIRE(r.status == 0);
  const auto j = json::parse(read("conv.json"));
  CHECK(j == json::parse(r.out));
  CHECK(j["points"].size() == 2);
  CHECK(read("conv.csv").rfind("N,d,stderr\n", 0) == 0);
}

TEST_CASE("lemmas runs a single check") {
  const auto r = run("lemmas " + network_path("futile.net") + " --which jump-moment --samples 300");
  CHECK(r.status == 0);
  CHECK(json::parse(r.out)["checks"].size() == 1);
}

TEST_CASE("usage errors") {
  CHECK(run("").status != 0);
  CHECK(run("reduce /no/such/file.net").status != 0);
  CHECK(run("lemmas " + network_path("futile.net") + " --which nothing").status != 0);
  CHECK(run("cme x.net --box 3 --auto-slice").status != 0);
}
