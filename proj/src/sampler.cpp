#include "latpois/sampler.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace latpois {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial) {
  return splitmix64_finalize((seed ^ std::rotl(trial, 32)) + kGoldenGamma);
}

double TrialRng::exponential(double mean) { return -mean * std::log1p(-uniform53()); }

std::uint64_t TrialRng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("TrialRng::below: bound must be positive");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= limit) return x % bound;
  }
}

BigInt TrialRng::below(const BigInt& bound) {
  if (bound <= 0) throw std::invalid_argument("TrialRng::below: bound must be positive");
  if (mpz_fits_ulong_p(bound.get_mpz_t()) && sizeof(unsigned long) == 8) {
    return BigInt(static_cast<unsigned long>(below(static_cast<std::uint64_t>(bound.get_ui()))));
  }
  // Draw as many bits as bound has and reject values >= bound.
  const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  for (;;) {
    BigInt x = 0;
    std::size_t filled = 0;
    while (filled < bits) {
      const std::size_t take = std::min<std::size_t>(64, bits - filled);
      std::uint64_t word = engine_();
      if (take < 64) word &= (std::uint64_t{1} << take) - 1;
      BigInt w;
      mpz_import(w.get_mpz_t(), 1, 1, sizeof(word), 0, 0, &word);
      x = (x << static_cast<mp_bitcnt_t>(take)) + w;
      filled += take;
    }
    if (x < bound) return x;
  }
}

bool is_probable_prime(const BigInt& p) {
  if (p < 2) return false;
  return mpz_probab_prime_p(p.get_mpz_t(), 40) != 0;
}

BigInt default_prime(std::uint64_t seed) {
  // Fixed trial index far from the ones used for lattice draws.
  const std::uint64_t offset = derive_seed(seed, ~std::uint64_t{0}) % 1'000'000;
  BigInt p = BigInt(1'000'000'000) + BigInt(static_cast<unsigned long>(offset));
  while (!is_probable_prime(p)) ++p;
  return p;
}

GMConfig GMConfig::make(int dim, BigInt prime, std::uint64_t seed) {
  if (dim < 2) throw std::invalid_argument("GM lattice dimension must be >= 2");
  if (prime < 3 || !is_probable_prime(prime)) {
    throw std::invalid_argument("GM prime must be a prime >= 3, got " + prime.get_str());
  }
  return GMConfig{dim, std::move(prime), seed};
}

LatticeBasis gm_lattice_from_multipliers(const BigInt& prime, const std::vector<BigInt>& multipliers) {
  const std::size_t n = multipliers.size() + 1;
  IntMatrix rows(n, std::vector<BigInt>(n, 0));
  rows[0][0] = 1;
  for (std::size_t i = 1; i < n; ++i) {
    rows[0][i] = multipliers[i - 1];
    rows[i][i] = prime;
  }
  return LatticeBasis::from_rows(std::move(rows));
}

LatticeBasis sample_gm_lattice(const GMConfig& cfg, std::uint64_t trial) {
  TrialRng rng(cfg.seed, trial);
  std::vector<BigInt> multipliers;
  multipliers.reserve(cfg.dim - 1);
  for (int i = 1; i < cfg.dim; ++i) multipliers.push_back(rng.below(cfg.prime));
  return gm_lattice_from_multipliers(cfg.prime, multipliers);
}

PoissonSample sample_poisson(double horizon, std::uint64_t seed, std::uint64_t trial) {
  if (!(horizon > 0.0)) throw std::invalid_argument("sample_poisson: horizon must be positive");
  PoissonSample s;
  s.horizon = horizon;
  TrialRng rng(seed, trial);
  const double mean_gap = 1.0 / s.intensity;
  double t = rng.exponential(mean_gap);
  while (t <= horizon) {
    s.points.push_back(t);
    t += rng.exponential(mean_gap);
  }
  return s;
}

}  // namespace latpois
