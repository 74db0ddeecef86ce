#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"

// RHZ_CLI_PATH is injected by the build: the absolute path of the rhz binary.

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

CmdResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const std::string cmd =
      env_prefix + (env_prefix.empty() ? "" : " ") + "\"" RHZ_CLI_PATH "\" " +
      args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult result;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
    result.output.append(buf, got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("eval prints values and honours the exit-code contract") {
  const CmdResult rogers = run_cli("eval rogers --x 0.5");
  CHECK(rogers.exit_code == 0);
  CHECK(contains(rogers.output, "0.822467033424113"));  // pi^2/12

  const CmdResult mhz1 = run_cli("eval mhz --x 1");
  CHECK(mhz1.exit_code == 0);
  CHECK(contains(mhz1.output, "mhz(1) = 0 "));
  CHECK(contains(mhz1.output, "err_bound"));

  const CmdResult digamma = run_cli("eval digamma --x 1");
  CHECK(digamma.exit_code == 0);
  CHECK(contains(digamma.output, "-0.57721566490153"));  // -gamma

  // Domain error: named precondition, exit 2.
  const CmdResult equal = run_cli("eval rhz --x 2 --y 2");
  CHECK(equal.exit_code == 2);
  CHECK(contains(equal.output, "x must differ from y"));

  const CmdResult negative = run_cli("eval hz --x -1");
  CHECK(negative.exit_code == 2);

  // Arity and spelling problems are usage errors, exit 64.
  CHECK(run_cli("eval rhz --x 2").exit_code == 64);
  CHECK(run_cli("eval dilog --x 0.5 --y 1").exit_code == 64);
  CHECK(run_cli("eval nosuch --x 1").exit_code == 64);
  CHECK(run_cli("nosuchcommand").exit_code == 64);
  CHECK(run_cli("").exit_code == 64);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("eval emits machine formats on request") {
  const CmdResult json = run_cli("eval rhz --x 2 --y 3 --format json");
  CHECK(json.exit_code == 0);
  const nlohmann::json doc = nlohmann::json::parse(json.output);
  CHECK(doc.at("schema") == 1);
  CHECK(doc.at("command") == "eval");
  CHECK(doc.at("params").at("function") == "rhz");
  CHECK(doc.at("params").at("x") == 2.0);
  CHECK(doc.at("result").at("value").is_number());
  CHECK(doc.at("result").at("err_bound").is_number());

  const CmdResult csv = run_cli("eval dilog --x 0.5 --format csv");
  CHECK(csv.exit_code == 0);
  CHECK(contains(csv.output, "function,x,y,value,err_bound\n"));
  CHECK(contains(csv.output, "dilog,0.5,,"));
}

TEST_CASE("hecke enumerate lists the determinant-3 set") {
  const CmdResult res = run_cli("hecke enumerate --n 3");
  CHECK(res.exit_code == 0);
  CHECK(contains(res.output, "S_n size: 7"));
  for (const char* row :
       {"[[1, 0], [0, 3]]", "[[1, 0], [1, 3]]", "[[1, 0], [2, 3]]",
        "[[2, 1], [1, 2]]", "[[3, 0], [0, 1]]", "[[3, 1], [0, 1]]",
        "[[3, 2], [0, 1]]"}) {
    CHECK(contains(res.output, row));
  }

  const CmdResult plus = run_cli("hecke enumerate --n 3 --plus");
  CHECK(plus.exit_code == 0);
  CHECK(contains(plus.output, "S_n^+ size: 3"));
  for (const char* row :
       {"[[2, 1], [1, 2]]", "[[3, 1], [0, 1]]", "[[3, 2], [0, 1]]"}) {
    CHECK(contains(plus.output, row));
  }
  CHECK(!contains(plus.output, "[[1, 0]"));  // b = 0 rows filtered out

  const CmdResult csv = run_cli("hecke enumerate --n 2 --format csv");
  CHECK(csv.exit_code == 0);
  CHECK(contains(csv.output, "a,b,c,d\n"));
  CHECK(contains(csv.output, "1,0,0,2\n"));

  CHECK(run_cli("hecke enumerate --n 0").exit_code == 2);
  CHECK(run_cli("hecke enumerate").exit_code == 64);
}

TEST_CASE("hecke check-cn and chains wrap the library checks") {
  const CmdResult cn = run_cli("hecke check-cn --n 12 --mode per-orbit");
  CHECK(cn.exit_code == 0);
  CHECK(contains(cn.output, "PASS"));

  const CmdResult total = run_cli("hecke check-cn --n 4 --mode total");
  CHECK(total.exit_code == 0);
  CHECK(contains(total.output, "total boundary"));

  const CmdResult chains = run_cli("hecke chains --l 5");
  CHECK(chains.exit_code == 0);
  CHECK(contains(chains.output, "chain 4"));
  CHECK(!contains(chains.output, "chain 5"));

  CHECK(run_cli("hecke chains --l 6").exit_code == 2);
  CHECK(run_cli("hecke check-cn --n 2 --mode sideways").exit_code == 64);
  CHECK(run_cli("hecke check-cn --n 2 --format csv").exit_code == 64);
}

TEST_CASE("verify single points match the library results") {
  const CmdResult t1 = run_cli("verify theorem1 --l 3 --x 2 --y 3");
  CHECK(t1.exit_code == 0);
  CHECK(contains(t1.output, "PASS k=3"));
  CHECK(contains(t1.output, "result: PASS"));

  const CmdResult rz1 = run_cli("verify rz --n 1 --x 1.3");
  CHECK(rz1.exit_code == 0);
  CHECK(contains(rz1.output, "residual=0"));

  CHECK(run_cli("verify nosuchsuite").exit_code == 64);
  CHECK(run_cli("verify theorem1 --l 4 --x 2 --y 3").exit_code == 2);
}

TEST_CASE("verify reports skips and fails with a strict tolerance") {
  // 2x2 grid with equal values on the diagonal: 2 reports + 2 skips.
  const CmdResult skips = run_cli("verify theorem1 --l 2 --grid 2 --grid 3");
  CHECK(skips.exit_code == 0);
  CHECK(contains(skips.output, "2/2 passed, 2 skipped"));
  CHECK(contains(skips.output, "excluded by grid constraint"));

  const CmdResult strict =
      run_cli("verify theorem1 --l 2 --x 2 --y 3 --tolerance 1e-20");
  CHECK(strict.exit_code == 1);
  CHECK(contains(strict.output, "FAIL"));

  // Environment override kicks in only when --tolerance is absent.
  const CmdResult env_strict = run_cli("verify theorem1 --l 2 --x 2 --y 3",
                                       "RHZ_TOLERANCE=1e-20");
  CHECK(env_strict.exit_code == 1);
  const CmdResult env_beaten =
      run_cli("verify theorem1 --l 2 --x 2 --y 3 --tolerance 1e-6",
              "RHZ_TOLERANCE=1e-20");
  CHECK(env_beaten.exit_code == 0);
  const CmdResult env_bad =
      run_cli("verify theorem1 --l 2 --x 2 --y 3", "RHZ_TOLERANCE=abc");
  CHECK(env_bad.exit_code == 2);
}

TEST_CASE("sampled five-term suite is reproducible and seed-sensitive") {
  const CmdResult a = run_cli("verify five-term --count 25 --seed 7");
  const CmdResult b = run_cli("verify five-term --count 25 --seed 7");
  const CmdResult c = run_cli("verify five-term --count 25 --seed 8");
  CHECK(a.exit_code == 0);
  CHECK(contains(a.output, "seed: 7"));
  CHECK(contains(a.output, "count: 25"));
  CHECK(a.output == b.output);
  CHECK(a.output != c.output);
}

TEST_CASE("json output is byte-identical across runs and round-trips") {
  const std::string args =
      "verify theorem1 --l 2 --l 3 --grid 0.7 --grid 2 --format json";
  const CmdResult first = run_cli(args);
  const CmdResult second = run_cli(args);
  CHECK(first.exit_code == 0);
  CHECK(first.output == second.output);

  // Parse -> re-serialize must reproduce the exact bytes.
  const nlohmann::json doc = nlohmann::json::parse(first.output);
  CHECK(doc.dump(2) + "\n" == first.output);

  CHECK(doc.at("schema") == 1);
  CHECK(doc.at("params").at("suite") == "theorem1");
  const auto& result = doc.at("result");
  CHECK(result.at("summary").at("total") == 4);  // off-diagonal pairs, 2 primes
  CHECK(result.at("summary").at("all_pass") == true);
  CHECK(result.at("reports").size() == 4);
  for (const auto& rep : result.at("reports")) {
    CHECK(rep.at("pass") == true);
    CHECK(rep.at("identity") == "theorem1");
  }
}

TEST_CASE("csv output has the documented column layout") {
  const CmdResult csv = run_cli("verify rz --n 2 --x 1.7 --format csv");
  CHECK(csv.exit_code == 0);
  std::istringstream lines(csv.output);
  std::string header, row;
  REQUIRE(std::getline(lines, header));
  REQUIRE(std::getline(lines, row));
  CHECK(header == "identity,l_or_n,x,y,residual,k,excess,pass");
  CHECK(row.substr(0, 9) == "rz,2,1.7,");
  CHECK(row.find(",true") != std::string::npos);

  // y column is empty for the single-variable identity.
  CHECK(contains(row, "1.7,,"));
}

TEST_CASE("verify --out writes the report file and keeps a summary on stdout") {
  const std::string path = "cli_report_test.json";
  std::remove(path.c_str());
  const CmdResult res = run_cli(
      "verify all --l 2 --n 1 --n 2 --grid 2 --grid 3 --count 10 --out " + path);
  CHECK(res.exit_code == 0);
  CHECK(contains(res.output, "report written to " + path));
  CHECK(contains(res.output, "result: PASS"));

  std::ifstream in(path);
  REQUIRE(in.good());
  const nlohmann::json doc = nlohmann::json::parse(in);
  CHECK(doc.at("schema") == 1);
  const auto& result = doc.at("result");
  CHECK(result.at("all_pass") == true);
  for (const char* suite : {"five_term", "rz", "theorem1", "telescope",
                            "chain_sum", "complement_sum"}) {
    CAPTURE(suite);
    CHECK(result.contains(suite));
    CHECK(result.at(suite).at("summary").at("all_pass") == true);
  }
  std::remove(path.c_str());

  const CmdResult bad = run_cli(
      "verify rz --n 1 --x 1.3 --out /nonexistent-dir/report.json");
  CHECK(bad.exit_code == 2);
  CHECK(contains(bad.output, "cannot open"));
}
