#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "latpois/cli.hpp"
#include "latpois/io.hpp"

using namespace latpois;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const char* env = std::getenv("LATPOIS_TEST_TMP");
  fs::path dir = fs::path(env ? env : fs::temp_directory_path().string()) / "cli_scratch";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("exact-moments") {
  auto r = run({"exact-moments", "--volumes", "1,2", "--form", "pair"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["pairMoment"]["exact"] == "1");
  r = run({"exact-moments", "--volumes", "3", "--form", "pair"});
  CHECK(json::parse(r.out)["pairMoment"]["exact"] == "3/2");
  r = run({"exact-moments", "--volumes", "1,1,1"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["identityHolds"] == true);
  CHECK(j["partitionForm"]["exact"] == "11/8");
  CHECK(j["matrixForm"]["exact"] == "11");

  CHECK(run({"exact-moments", "--volumes", "2,1"}).code == kExitUsage);
  CHECK(run({"exact-moments", "--volumes", "0,1"}).code == kExitUsage);
  CHECK(run({"exact-moments", "--volumes", "0.5"}).code == kExitUsage);
  CHECK(run({"exact-moments", "--volumes", "1,2", "--form", "other"}).code == kExitUsage);
  CHECK(run({"exact-moments", "--volumes", "1,2,3", "--k-max", "2"}).code == kExitUsage);
  const auto bad = run({"exact-moments", "--volumes", "2,1"});
  CHECK(bad.out.empty());
  CHECK_FALSE(bad.err.empty());
}

TEST_CASE("verify") {
  auto r = run({"verify", "--k-max", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"bell\":\"5\"") != std::string::npos);
  CHECK(run({"verify", "--k-max", "1"}).code == 0);
  r = run({"verify", "--k-max", "3", "--corrupt-closed-form"});
  CHECK(r.code == kExitVerifyFailed);
  CHECK(r.err.find("closed form") != std::string::npos);
  CHECK(run({"verify", "--k-max", "11"}).code == kExitUsage);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"simulate", "--trials", "0"}).code == kExitUsage);
  CHECK(run({"simulate", "--trials", "5", "--thresholds", "2,1"}).code == kExitUsage);
  CHECK(run({"simulate", "--trials", "5", "--kind", "lattice", "--dim", "1"}).code == kExitUsage);
  CHECK(run({"simulate", "--trials", "5", "--format", "xml"}).code == kExitUsage);
  CHECK(run({"sample", "--kind", "lattice", "--dim", "3", "--prime", "9"}).code == kExitUsage);
  CHECK(run({"shortvec", "--basis", "/nonexistent.json", "--first", "2"}).code == kExitUsage);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("simulate writes complete files only") {
  const fs::path dir = scratch();
  const fs::path out = dir / "poisson.json";
  fs::remove(out);
  auto r = run({"simulate", "--kind", "poisson", "--trials", "0", "--output", out.string()});
  CHECK(r.code == kExitUsage);
  CHECK_FALSE(fs::exists(out));
  CHECK(run({"simulate", "--trials", "5", "--output", (dir / "missing" / "x.json").string()}).code == kExitUsage);

  r = run({"simulate", "--kind", "poisson", "--trials", "50", "--thresholds", "1,2", "--seed", "4",
           "--deterministic", "--output", out.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  const std::string first = slurp(out);
  const json j = json::parse(first);
  CHECK(j["nTrials"] == 50);
  CHECK(j["metadata"]["seed"] == 4);
  CHECK_FALSE(j["metadata"].contains("timestamp"));
  run({"simulate", "--kind", "poisson", "--trials", "50", "--thresholds", "1,2", "--seed", "4", "--deterministic",
       "--output", out.string()});
  CHECK(slurp(out) == first);
  CHECK_FALSE(fs::exists(out.string() + ".tmp"));

  // Lattice budget exhaustion is a resource error and leaves no file.
  const fs::path lat = dir / "budget.json";
  fs::remove(lat);
  r = run({"simulate", "--kind", "lattice", "--dim", "10", "--trials", "5", "--node-budget", "3", "--output",
           lat.string()});
  CHECK(r.code == kExitBudget);
  CHECK_FALSE(fs::exists(lat));

  const auto csv = run({"simulate", "--kind", "poisson", "--trials", "3", "--format", "csv", "--thresholds", "4"});
  CHECK(csv.out.rfind("trial,ok,N(4)\n", 0) == 0);
}

TEST_CASE("seed from the environment") {
  ::setenv(kSeedEnvVar, "77", 1);
  auto r = run({"sample", "--kind", "poisson", "--trials", "2", "--deterministic"});
  CHECK(json::parse(r.out.substr(0, r.out.find('\n')))["metadata"]["seed"] == 77);
  r = run({"sample", "--kind", "poisson", "--trials", "2", "--deterministic", "--seed", "3"});
  CHECK(json::parse(r.out.substr(0, r.out.find('\n')))["metadata"]["seed"] == 3);
  ::setenv(kSeedEnvVar, "abc", 1);
  CHECK(run({"sample", "--kind", "poisson"}).code == kExitUsage);
  ::unsetenv(kSeedEnvVar);
}

TEST_CASE("sample, shortvec and correlations") {
  const fs::path dir = scratch();
  auto r = run({"sample", "--kind", "lattice", "--dim", "6", "--trials", "2", "--emit-raw", "--seed", "9",
                "--deterministic"});
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string head;
  std::string basis;
  std::getline(lines, head);
  std::getline(lines, basis);
  CHECK(json::parse(head)["metadata"]["config"]["dim"] == 6);
  {
    std::ofstream f(dir / "basis.json");
    f << basis;
  }
  r = run({"shortvec", "--basis", (dir / "basis.json").string(), "--first", "5", "--deterministic"});
  CHECK(r.code == 0);
  const json sv = json::parse(r.out);
  CHECK(sv["volumes"].size() == 5);
  CHECK(sv["rawNormSq"].size() == 5);
  CHECK(sv["multiplicities"].size() == 5);
  CHECK(run({"shortvec", "--basis", (dir / "basis.json").string()}).code == kExitUsage);
  CHECK(run({"shortvec", "--basis", (dir / "basis.json").string(), "--first", "2", "--volume-max", "3"}).code ==
        kExitUsage);
  CHECK(run({"shortvec", "--basis", (dir / "basis.json").string(), "--volume-max", "40", "--node-budget", "2"})
            .code == kExitBudget);

  r = run({"correlations", "--basis", (dir / "basis.json").string(), "--m", "2", "--intervals=-1:1", "--N", "50"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["poissonian"] == 1.0);
  r = run({"correlations", "--poisson", "--seed", "2", "--m", "3", "--intervals=-1:1,-1:1", "--N", "100"});
  CHECK(r.code == 0);
  CHECK(run({"correlations", "--poisson", "--m", "3", "--intervals=-1:1", "--N", "100"}).code == kExitUsage);
  CHECK(run({"correlations", "--m", "2", "--N", "100"}).code == kExitUsage);
}

TEST_CASE("compare") {
  const fs::path dir = scratch();
  const std::string lat = (dir / "cmp_lattice.json").string();
  const std::string poi = (dir / "cmp_poisson.json").string();
  REQUIRE(run({"simulate", "--kind", "lattice", "--dim", "6", "--trials", "60", "--thresholds", "1,2", "--seed", "1",
               "--output", lat})
              .code == 0);
  REQUIRE(run({"simulate", "--kind", "poisson", "--trials", "60", "--thresholds", "1,2", "--seed", "1", "--output",
               poi})
              .code == 0);
  auto r = run({"compare", "--lattice", lat, "--poisson", poi, "--deterministic"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["dims"] == 6);
  REQUIRE(j["rows"].size() == 3);
  CHECK(j["rows"][2]["exact"] == "1");
  CHECK(j["rows"][0]["exact"] == "1/2");
  CHECK(j["nTrials"]["lattice"] == 60);
  r = run({"compare", "--lattice", lat, "--poisson", lat});
  CHECK(json::parse(r.out)["rows"][2]["zScores"]["pairwise"] == 0.0);
  CHECK(run({"compare", "--lattice", lat, "--poisson", poi, "--volumes", "1,3"}).code == kExitUsage);
}

}  // TEST_SUITE
