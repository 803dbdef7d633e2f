#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "latpois/lattice.hpp"
#include "latpois/sampler.hpp"
#include "latpois/simulation.hpp"
#include "latpois/stats.hpp"

namespace latpois {

using nlohmann::json;

// Basis file: {"dim": n, "rows": [["int", ...], ...], "rawDet": "int"}.
// Integers travel as decimal strings so nothing is truncated to 64 bits.
json basis_to_json(const LatticeBasis& b);
LatticeBasis basis_from_json(const json& j);
LatticeBasis read_basis_file(const std::filesystem::path& path);

/// {"volumes": [...], "rawNormSq": ["..."], "multiplicities": [...]}
json volume_sequence_to_json(const VolumeSequence& seq);

json poisson_sample_to_json(const PoissonSample& s, std::uint64_t trial);

/// Exact rational as "p/q" (or "p" when q = 1).
std::string rational_to_string(const Rational& r);
/// Decimal approximation with the given number of significant digits.
std::string rational_to_decimal(const Rational& r, int digits = 17);

/// Run metadata common to every output: version, rng, seed and, when set, prime.
json run_metadata(std::uint64_t seed, const BigInt* prime, bool deterministic);

/// Simulation report: metadata, config, per-threshold means, and per-trial counts.
json simulation_to_json(const SimulationRun& run, bool deterministic);
/// Reads the per-trial counts back from a simulation report.
CountRun count_run_from_json(const json& j);
/// One line per trial: trial,ok,N(t_1),...,N(t_k).
std::string simulation_to_csv(const SimulationRun& run);

json comparison_to_json(const ComparisonReport& report, std::uint64_t lattice_trials, std::uint64_t poisson_trials,
                        int dim);

/// Writes via a temporary file and rename, so readers never see partial output.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace latpois
