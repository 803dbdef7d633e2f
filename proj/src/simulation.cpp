#include "latpois/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace latpois {

std::string to_string(SimulationKind kind) { return kind == SimulationKind::Lattice ? "lattice" : "poisson"; }

SimulationKind parse_simulation_kind(const std::string& s) {
  if (s == "lattice") return SimulationKind::Lattice;
  if (s == "poisson") return SimulationKind::Poisson;
  throw std::invalid_argument("unknown simulation kind '" + s + "' (expected lattice|poisson)");
}

void SimulationConfig::validate() const {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  if (thresholds.empty()) throw std::invalid_argument("at least one threshold is required");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0.0) || !std::isfinite(thresholds[i])) {
      throw std::invalid_argument("thresholds must be positive and finite");
    }
    if (i > 0 && !(thresholds[i] > thresholds[i - 1])) {
      throw std::invalid_argument("thresholds must be strictly increasing");
    }
  }
  if (kind == SimulationKind::Lattice) GMConfig::make(dim, prime, seed);
}

CountRun SimulationRun::count_run() const {
  CountRun run;
  run.label = to_string(config.kind);
  run.thresholds = config.thresholds;
  for (const auto& t : trials) {
    if (t.ok) run.samples.push_back(t.counts);
  }
  return run;
}

std::vector<double> SimulationRun::first_volumes() const {
  std::vector<double> out;
  for (const auto& t : trials) {
    if (t.ok) out.push_back(t.first_volume);
  }
  return out;
}

TrialResult run_trial(const SimulationConfig& cfg, std::uint64_t trial) {
  TrialResult r;
  r.trial = trial;
  const double t_max = cfg.thresholds.back();
  if (cfg.kind == SimulationKind::Poisson) {
    const PoissonSample s = sample_poisson(t_max, cfg.seed, trial);
    for (double t : cfg.thresholds) {
      r.counts.push_back(static_cast<std::uint64_t>(std::upper_bound(s.points.begin(), s.points.end(), t) -
                                                    s.points.begin()));
    }
    if (cfg.record_first_volume) {
      // T_1 is the first gap of the same stream, whether or not it fell inside the horizon.
      r.first_volume = TrialRng(cfg.seed, trial).exponential(1.0 / s.intensity);
    }
    return r;
  }
  try {
    const GMConfig gm{cfg.dim, cfg.prime, cfg.seed};
    const Enumerator en(sample_gm_lattice(gm, trial), cfg.enumeration);
    const VolumeSequence seq = en.up_to_volume(t_max);
    r.counts = count_record(seq, cfg.thresholds).counts;
    if (cfg.record_first_volume) {
      r.first_volume = seq.entries.empty() ? en.first(1).entries.front().volume : seq.entries.front().volume;
    }
  } catch (const BudgetExceeded& e) {
    r.ok = false;
    r.error = e.what();
    r.counts.assign(cfg.thresholds.size(), 0);
  }
  return r;
}

SimulationRun run_simulation(const SimulationConfig& cfg, const std::function<void(std::uint64_t)>& progress) {
  cfg.validate();
  SimulationRun run;
  run.config = cfg;
  run.trials.resize(cfg.trials);
  std::atomic<std::uint64_t> done{0};
  std::mutex progress_mutex;
  parallel_for(cfg.trials, cfg.workers, [&](std::uint64_t i) {
    run.trials[i] = run_trial(cfg, i);
    const std::uint64_t d = ++done;
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(d);
    }
  });
  for (const auto& t : run.trials) run.failed += t.ok ? 0 : 1;
  if (run.failed * 1000 > cfg.trials) {
    throw SimulationAborted("simulation aborted: " + std::to_string(run.failed) + " of " +
                            std::to_string(cfg.trials) + " trials exceeded the enumeration budget");
  }
  return run;
}

}  // namespace latpois
