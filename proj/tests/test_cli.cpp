#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "nif/io.hpp"

namespace {

namespace fs = std::filesystem;

std::string cli_path() {
  const char* env = std::getenv("NIF_CLI");
  REQUIRE_MESSAGE(env != nullptr, "NIF_CLI must point at the CLI binary");
  return env;
}

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "nif_cli_tests";
  fs::create_directories(dir);
  return dir;
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path out = scratch_dir() / ("out" + std::to_string(counter++));
  const std::string cmd =
      cli_path() + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WEXITSTATUS(status);
  std::ifstream in(out);
  std::ostringstream ss;
  ss << in.rdbuf();
  res.stdout_text = ss.str();
  return res;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("poa on the bundled direct example reports an equilibrium gap") {
  const RunResult res = run_cli(
      "poa --example fig2 --c1 4 --c2 8 --n 64 --m 64 --gap 1e-10 "
      "--max-iters 60000 --format json");
  REQUIRE(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.stdout_text);
  CHECK(j.at("ratio").get<double>() > 1.0003);
  CHECK(j.at("wardrop_cost").get<double>() ==
        doctest::Approx(1.9061).epsilon(2e-3));
  CHECK(j.at("opt_cost").get<double>() ==
        doctest::Approx(1.9052).epsilon(2e-3));
  CHECK(j.at("wardrop_mean_rates")[0].get<double>() ==
        doctest::Approx(0.5695).epsilon(1e-2));
  CHECK(j.at("opt_mean_rates")[0].get<double>() ==
        doctest::Approx(0.5635).epsilon(1e-2));
}

TEST_CASE("poa human report carries the headline numbers") {
  const RunResult res = run_cli(
      "poa --example fig2 --c1 4 --c2 8 --n 64 --m 64 --gap 1e-10");
  REQUIRE(res.exit_code == 0);
  CHECK(res.stdout_text.find("wardrop cost (limit): 1.9062") !=
        std::string::npos);
  CHECK(res.stdout_text.find("ratio") != std::string::npos);
  CHECK(res.stdout_text.find("upper bound") != std::string::npos);
}

TEST_CASE("check-wardrop accepts the relay example candidate") {
  const RunResult res = run_cli(
      "check-wardrop --example fig1 --ns 8 --nt 8 --h 1 --c1 64 --c2 23 "
      "--limit-mode --candidate wardrop --tol 1e-9 --assert");
  CHECK(res.exit_code == 0);
  CHECK(res.stdout_text.find("PASS") != std::string::npos);
}

TEST_CASE("malformed entropy tables exit 1 naming the violation") {
  const fs::path bad = scratch_dir() / "bad_instance.json";
  std::ofstream(bad) << R"({
    "nodes": ["s1", "s2", "t1"],
    "edges": [
      {"id": "e1", "tail": "s1", "head": "t1", "cost": {"a": 1, "k": 1}},
      {"id": "e2", "tail": "s2", "head": "t1", "cost": {"a": 1, "k": 1}}
    ],
    "sources": [
      {"node": "s1", "cost": {"a": 1, "k": 2}},
      {"node": "s2", "cost": {"a": 1, "k": 2}}
    ],
    "terminals": ["t1"],
    "entropy": {"num_sources": 2,
                "table": [[0, 0.0], [1, 1.0], [2, 1.0], [3, 3.0]]}
  })";
  const RunResult res =
      run_cli("solve-opt --instance " + bad.string());
  CHECK(res.exit_code == 1);
}

TEST_CASE("exit codes are a function of the outcome category") {
  SUBCASE("success is 0") {
    CHECK(run_cli("solve-opt --example fig2 --c1 4 --c2 8 --n 16 --m 16")
              .exit_code == 0);
  }
  SUBCASE("validation problems are 1") {
    CHECK(run_cli("solve-opt --instance /nonexistent.json").exit_code == 1);
    CHECK(run_cli("solve-opt").exit_code == 1);          // no instance
    CHECK(run_cli("frobnicate").exit_code == 1);         // unknown command
    CHECK(run_cli("poa --example fig2 --c1 -4 --c2 8").exit_code == 1);
  }
  SUBCASE("non-convergence is 2") {
    CHECK(run_cli("solve-opt --example fig2 --c1 4 --c2 8 --n 64 --m 64 "
                  "--gap 1e-14 --max-iters 3 --step diminishing")
              .exit_code == 2);
  }
  SUBCASE("failed checks are 3 in assert mode, 0 otherwise") {
    // The relay equilibrium point is not optimal for the untransformed
    // instance.
    const std::string args =
        "check-opt --example fig1 --ns 8 --nt 8 --h 1 --c1 64 --c2 23 "
        "--limit-mode --candidate wardrop --tol 1e-6";
    CHECK(run_cli(args + " --assert").exit_code == 3);
    CHECK(run_cli(args).exit_code == 0);
  }
}

TEST_CASE("example emission round-trips and solve consumes it") {
  const fs::path inst_path = scratch_dir() / "fig2.json";
  const RunResult gen = run_cli("example --example fig2 --c1 4 --c2 8 "
                                "--n 32 --m 32 --out " +
                                inst_path.string());
  REQUIRE(gen.exit_code == 0);
  const std::string text = read_file(inst_path);
  const nif::Instance inst = nif::parse_instance(text);
  CHECK(nif::serialize_instance(inst) == text);

  const RunResult solved =
      run_cli("solve-opt --instance " + inst_path.string() + " --format json");
  REQUIRE(solved.exit_code == 0);
  const auto j = nlohmann::json::parse(solved.stdout_text);
  CHECK(j.at("converged").get<bool>());
}

TEST_CASE("solve writes flow-rates that check commands consume") {
  const fs::path inst_path = scratch_dir() / "fig2b.json";
  REQUIRE(run_cli("example --example fig2 --c1 4 --c2 8 --n 64 --m 64 --out " +
                  inst_path.string())
              .exit_code == 0);
  const fs::path fr_path = scratch_dir() / "fig2b_flow.json";
  REQUIRE(run_cli("solve-opt --instance " + inst_path.string() +
                  " --gap 1e-10 --max-iters 60000 --flow-out " +
                  fr_path.string())
              .exit_code == 0);
  const RunResult check = run_cli(
      "check-opt --instance " + inst_path.string() + " --flow-rate " +
      fr_path.string() + " --tol 1e-3 --assert");
  CHECK(check.exit_code == 0);
}

TEST_CASE("check commands solve for a point when none is given") {
  // Limit-mode check of a freshly solved equilibrium (solved at finite
  // exponents behind the scenes).
  const RunResult res = run_cli(
      "check-wardrop --example fig2 --c1 4 --c2 8 --limit-mode "
      "--gap 1e-10 --tol 2e-2 --assert");
  CHECK(res.exit_code == 0);
}

TEST_CASE("sweep emits the CSV schema") {
  const RunResult res = run_cli(
      "sweep --family independent --count 3 --seed 11 --solve-exponent 32");
  REQUIRE(res.exit_code == 0);
  CHECK(res.stdout_text.rfind(
            "family,params,wardrop_cost,opt_cost,ratio,bound,flags\n", 0) ==
        0);
  // Three data rows.
  int lines = 0;
  for (char c : res.stdout_text)
    if (c == '\n') ++lines;
  CHECK(lines == 4);
}

TEST_CASE("reports are byte-identical across runs") {
  const std::string args =
      "check-wardrop --example fig1 --ns 4 --nt 4 --h 1 --c1 8 --c2 23 "
      "--limit-mode --candidate wardrop --tol 1e-9";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  CHECK(a.stdout_text == b.stdout_text);

  const fs::path out1 = scratch_dir() / "rep1.json";
  const fs::path out2 = scratch_dir() / "rep2.json";
  REQUIRE(run_cli(args + " --format json --out " + out1.string()).exit_code ==
          0);
  REQUIRE(run_cli(args + " --format json --out " + out2.string()).exit_code ==
          0);
  CHECK(read_file(out1) == read_file(out2));
}

TEST_CASE("solver trace lands in the requested CSV") {
  const fs::path trace = scratch_dir() / "trace.csv";
  REQUIRE(run_cli("solve-opt --example fig2 --c1 4 --c2 8 --n 32 --m 32 "
                  "--trace " +
                  trace.string())
              .exit_code == 0);
  const std::string text = read_file(trace);
  CHECK(text.rfind("iteration,cost,gap\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') >= 2);
}
