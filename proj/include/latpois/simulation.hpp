#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "latpois/sampler.hpp"
#include "latpois/shortvec.hpp"
#include "latpois/stats.hpp"

namespace latpois {

enum class SimulationKind { Lattice, Poisson };

std::string to_string(SimulationKind kind);
SimulationKind parse_simulation_kind(const std::string& s);

struct SimulationConfig {
  SimulationKind kind = SimulationKind::Poisson;
  int dim = 0;        // lattice only
  BigInt prime = 0;   // lattice only
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::vector<double> thresholds;  // strictly increasing, positive
  bool record_first_volume = false;
  EnumerationOptions enumeration;
  unsigned workers = 0;  // 0: hardware concurrency

  void validate() const;
};

struct TrialResult {
  std::uint64_t trial = 0;
  bool ok = true;
  CountVector counts;
  double first_volume = 0.0;  // V_1 (lattice) or T_1 (Poisson) when recorded
  std::string error;
};

struct SimulationRun {
  SimulationConfig config;
  std::vector<TrialResult> trials;  // sorted by trial index
  std::uint64_t failed = 0;

  CountRun count_run() const;
  std::vector<double> first_volumes() const;
};

class SimulationAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One trial, deterministic in (config, trial).
TrialResult run_trial(const SimulationConfig& cfg, std::uint64_t trial);

/// Runs all trials on a worker pool. Results are placed by trial index, so the
/// outcome does not depend on scheduling. Throws SimulationAborted when more
/// than 0.1% of trials fail.
SimulationRun run_simulation(const SimulationConfig& cfg,
                             const std::function<void(std::uint64_t done)>& progress = {});

/// Runs fn(i) for i in [0, count) on `workers` threads.
template <class Fn>
void parallel_for(std::uint64_t count, unsigned workers, Fn&& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  if (workers == 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::uint64_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

}  // namespace latpois
