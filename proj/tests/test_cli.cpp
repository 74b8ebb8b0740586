#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "mvcf/families.hpp"
#include "mvcf/jsonio.hpp"

#ifndef MVCF_CLI_PATH
#define MVCF_CLI_PATH "mvcf"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(MVCF_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) res.output.append(buf, got);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

}  // namespace

TEST_CASE("cli: moment table for legendre ends at mu_4 = 1/5") {
  const RunResult res = run_cli("--weight legendre moments --degree 2");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("\"d\": 1") != std::string::npos);
  CHECK(res.output.find("0.20000000000000001") != std::string::npos);
}

TEST_CASE("cli: symmap moments include the vanishing odd moment") {
  const RunResult res =
      run_cli("--weight symmap:base=chebyshev,d=2,sign=-0.5 moments --degree 1 --format csv");
  CHECK(res.exit_code == 0);
  // the "1 0" row carries a numerically vanishing moment
  const auto pos = res.output.find("\n1 0;");
  REQUIRE(pos != std::string::npos);
  const double value = std::strtod(res.output.c_str() + pos + 5, nullptr);
  CHECK(std::abs(value) < 1e-15);
}

TEST_CASE("cli: bad descriptor exits 3 and names the families") {
  const std::string cmd =
      std::string(MVCF_CLI_PATH) + " --weight fourier moments --degree 1 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
  const int status = pclose(pipe);
  CHECK(WEXITSTATUS(status) == 3);
  CHECK(out.find("legendre") != std::string::npos);
  CHECK(out.find("chebyshev") != std::string::npos);
}

TEST_CASE("cli: check passes the symmetric family and rejects the product") {
  CHECK(run_cli("--weight symmap:base=chebyshev,d=2,sign=-0.5 check --levels 3").exit_code == 0);
  const RunResult res = run_cli("--weight legendre --d 2 check --levels 2");
  CHECK(res.exit_code == 4);
  CHECK(res.output.find("\"failing_level\": 2") != std::string::npos);
  CHECK(res.output.find("\"witness\"") != std::string::npos);
}

TEST_CASE("cli: recover report carries per-level coincidence") {
  const RunResult res = run_cli("--weight legendre recover --levels 4");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("\"coincidence_max_dev\"") != std::string::npos);
  CHECK(res.output.find("\"first_mismatch_alpha\": null") != std::string::npos);
}

TEST_CASE("cli: identical config and seed give byte-identical output") {
  const std::string args = "--weight symmap:base=chebyshev,d=2,sign=-0.5 zeros --degree 3 --seed 42";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(!a.output.empty());
}

TEST_CASE("cli: degree guard on table input exits 2") {
  // a short moment table cannot serve high degrees
  auto p = mvcf::make_provider(mvcf::parse_weight_descriptor("legendre"), 1, 4);
  const std::string path = "cli_table_test.json";
  mvcf::write_atomic(path, mvcf::moments_to_json(*p, 4));
  const RunResult ok = run_cli("--weight table:" + path + " moments --degree 2");
  CHECK(ok.exit_code == 0);
  const RunResult bad = run_cli("--weight table:" + path + " moments --degree 4");
  CHECK(bad.exit_code == 2);
  std::remove(path.c_str());
}

TEST_CASE("cli: --out writes the file atomically") {
  const std::string path = "cli_out_test.json";
  const RunResult res = run_cli("--weight chebyshev cubature --degree 3 --out " + path);
  CHECK(res.exit_code == 0);
  CHECK(res.output.empty());
  std::ifstream f(path);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str().find("\"exact_degree\": 5") != std::string::npos);
  CHECK(ss.str().find("\"weights\"") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("cli: zeros of the symmetric family at degree 2") {
  const RunResult res = run_cli("--weight symmap:base=chebyshev,d=2,sign=-0.5 zeros --degree 2");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("\"n\": 2") != std::string::npos);
  CHECK(res.output.find("1.4142135623730951") != std::string::npos);
}
