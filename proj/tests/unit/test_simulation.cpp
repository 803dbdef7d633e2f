#include <doctest.h>

#include <cmath>

#include "latpois/io.hpp"
#include "latpois/simulation.hpp"

using namespace latpois;

namespace {

SimulationConfig lattice_config(int dim, std::uint64_t trials) {
  SimulationConfig c;
  c.kind = SimulationKind::Lattice;
  c.dim = dim;
  c.prime = default_prime(5);
  c.seed = 5;
  c.trials = trials;
  c.thresholds = {0.5, 1.0, 2.0};
  c.record_first_volume = true;
  return c;
}

}  // namespace

TEST_SUITE("simulation") {

TEST_CASE("config validation") {
  SimulationConfig c;
  c.trials = 0;
  c.thresholds = {1.0};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.trials = 3;
  c.thresholds = {2.0, 1.0};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.thresholds = {-1.0};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.thresholds = {1.0};
  CHECK_NOTHROW(c.validate());
  auto l = lattice_config(1, 3);
  CHECK_THROWS_AS(l.validate(), std::invalid_argument);
  CHECK(parse_simulation_kind("poisson") == SimulationKind::Poisson);
  CHECK_THROWS_AS(parse_simulation_kind("torus"), std::invalid_argument);
}

TEST_CASE("parallel and serial runs agree") {
  auto c = lattice_config(8, 40);
  c.workers = 1;
  const SimulationRun serial = run_simulation(c);
  c.workers = 4;
  const SimulationRun parallel = run_simulation(c);
  CHECK(simulation_to_json(serial, true).dump() == simulation_to_json(parallel, true).dump());
  for (std::size_t i = 0; i < serial.trials.size(); ++i) CHECK(serial.trials[i].trial == i);
  for (const auto& t : serial.trials) {
    CHECK(t.ok);
    CHECK(std::is_sorted(t.counts.begin(), t.counts.end()));
    CHECK(t.first_volume > 0.0);
  }
}

TEST_CASE("trials are reproducible one at a time") {
  const auto c = lattice_config(6, 10);
  const SimulationRun run = run_simulation(c);
  for (std::uint64_t t : {0ull, 3ull, 9ull}) {
    const TrialResult r = run_trial(c, t);
    CHECK(r.counts == run.trials[t].counts);
    CHECK(r.first_volume == run.trials[t].first_volume);
  }
}

TEST_CASE("Poisson counts and first points") {
  SimulationConfig c;
  c.kind = SimulationKind::Poisson;
  c.seed = 8;
  c.trials = 20000;
  c.thresholds = {4.0};
  c.record_first_volume = true;
  const SimulationRun run = run_simulation(c);
  const CountRun counts = run.count_run();
  std::vector<double> v;
  for (const auto& s : counts.samples) v.push_back(static_cast<double>(s[0]));
  const MomentEstimate e = estimate_mean(v);
  CHECK(std::fabs(e.value - 2.0) < 4.0 * e.std_error);
  const auto first = run.first_volumes();
  REQUIRE(first.size() == 20000);
  CHECK(ks_statistic_exp2(first) < 1.63 / std::sqrt(20000.0));
}

TEST_CASE("budget failures abort the run") {
  auto c = lattice_config(12, 20);
  c.enumeration.node_budget = 5;
  CHECK_THROWS_AS(run_simulation(c), SimulationAborted);
  const TrialResult r = run_trial(c, 0);
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.error.empty());
}

TEST_CASE("report round trip") {
  const auto c = lattice_config(6, 12);
  const SimulationRun run = run_simulation(c);
  const json j = simulation_to_json(run, true);
  CHECK_FALSE(j["metadata"].contains("timestamp"));
  CHECK(j["metadata"]["prime"] == c.prime.get_str());
  CHECK(j["metadata"]["seed"] == 5);
  CHECK(j["metadata"]["config"]["dim"] == 6);
  CHECK(simulation_to_json(run, false)["metadata"].contains("timestamp"));
  const CountRun back = count_run_from_json(j);
  CHECK(back.thresholds == c.thresholds);
  CHECK(back.samples == run.count_run().samples);
  const std::string csv = simulation_to_csv(run);
  CHECK(csv.rfind("trial,ok,N(0.5),N(1),N(2)\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
}

}  // TEST_SUITE
