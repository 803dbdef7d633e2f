#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "latpois/lattice.hpp"

namespace latpois {

/// Name of the generator recorded in run metadata.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64 seeded by splitmix64(seed ^ rotl(trial, 32))";

/// Per-trial seed. A bijection of trial for every fixed seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial);

/// Deterministic per-trial stream. Distribution code is written out here
/// rather than taken from <random> so streams agree across standard libraries.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial) : engine_(derive_seed(seed, trial)) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform53() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Exponential variate with the given mean, by inversion.
  double exponential(double mean);
  /// Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound);
  BigInt below(const BigInt& bound);

 private:
  std::mt19937_64 engine_;
};

/// Miller-Rabin style check via GMP with 40 rounds.
bool is_probable_prime(const BigInt& p);

/// Smallest prime >= 10^9 + (seed-dependent offset below 10^6).
BigInt default_prime(std::uint64_t seed);

struct GMConfig {
  int dim = 0;
  BigInt prime;
  std::uint64_t seed = 0;

  /// Validates n >= 2 and that prime is an odd prime. Throws std::invalid_argument.
  static GMConfig make(int dim, BigInt prime, std::uint64_t seed);
};

/*
 * Goldstein-Mayer lattice for one trial: rows
 *
 *   [1, a_2, ..., a_n]
 *   [0, p,   0, ..., 0]
 *   ...
 *   [0, ..., 0,      p]
 *
 * with a_i uniform in [0, p). rawDet = p^(n-1). These lattices equidistribute
 * in the space of covolume-1 lattices as p grows.
 */
LatticeBasis sample_gm_lattice(const GMConfig& cfg, std::uint64_t trial);

/// The cyclic basis for explicit multipliers a_2..a_n.
LatticeBasis gm_lattice_from_multipliers(const BigInt& prime, const std::vector<BigInt>& multipliers);

struct PoissonSample {
  std::vector<double> points;
  double horizon = 0.0;
  double intensity = 0.5;
};

/// Points of an intensity-1/2 Poisson process on (0, horizon].
PoissonSample sample_poisson(double horizon, std::uint64_t seed, std::uint64_t trial);

}  // namespace latpois
