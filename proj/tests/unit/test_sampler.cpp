#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "latpois/sampler.hpp"
#include "latpois/shortvec.hpp"

using namespace latpois;

TEST_SUITE("sampler") {

TEST_CASE("derive is deterministic and injective in the trial") {
  CHECK(derive_seed(42, 7) == derive_seed(42, 7));
  std::vector<std::uint64_t> v(1u << 20);
  for (std::uint64_t t = 0; t < v.size(); ++t) v[t] = derive_seed(0, t);
  std::sort(v.begin(), v.end());
  CHECK(std::adjacent_find(v.begin(), v.end()) == v.end());

  TrialRng a(0, 0);
  TrialRng b(0, 1);
  CHECK(a.next_u64() != b.next_u64());
  TrialRng c(0, 0);
  TrialRng d(0, 0);
  for (int i = 0; i < 100; ++i) CHECK(c.next_u64() == d.next_u64());
}

TEST_CASE("uniform, exponential and bounded draws") {
  TrialRng rng(5, 3);
  double sum = 0.0;
  double esum = 0.0;
  const int n = 200000;
  std::vector<int> bins(7, 0);
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform53();
    CHECK_UNARY(u >= 0.0);
    CHECK_UNARY(u < 1.0);
    sum += u;
    esum += rng.exponential(2.0);
    ++bins[rng.below(7)];
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(esum / n == doctest::Approx(2.0).epsilon(0.02));
  for (int c : bins) CHECK(c == doctest::Approx(n / 7.0).epsilon(0.03));
  const BigInt big("123456789012345678901234567");
  for (int i = 0; i < 100; ++i) {
    const BigInt x = rng.below(big);
    CHECK(x >= 0);
    CHECK(x < big);
  }
}

TEST_CASE("primes") {
  CHECK(is_probable_prime(BigInt(1000000007)));
  CHECK_FALSE(is_probable_prime(BigInt(1000000008)));
  CHECK_FALSE(is_probable_prime(BigInt(561)));  // Carmichael
  for (std::uint64_t s : {0ull, 1ull, 99ull}) {
    const BigInt p = default_prime(s);
    CHECK(is_probable_prime(p));
    CHECK(p >= BigInt(1000000000));
    CHECK(p < BigInt(1000000000 + 1000000 + 1000));
    CHECK(default_prime(s) == p);
  }
}

TEST_CASE("GM config validation") {
  CHECK_THROWS_AS(GMConfig::make(1, 5, 0), std::invalid_argument);
  CHECK_THROWS_AS(GMConfig::make(3, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(GMConfig::make(3, 15, 0), std::invalid_argument);
  CHECK_NOTHROW(GMConfig::make(3, 7, 0));
}

TEST_CASE("GM lattices") {
  const GMConfig cfg = GMConfig::make(6, BigInt(1000000007), 9);
  for (std::uint64_t t = 0; t < 5; ++t) {
    const LatticeBasis b = sample_gm_lattice(cfg, t);
    BigInt expect;
    mpz_pow_ui(expect.get_mpz_t(), cfg.prime.get_mpz_t(), 5);
    CHECK(b.raw_det() == expect);
    CHECK(b.rows()[0][0] == 1);
    for (int j = 1; j < 6; ++j) {
      CHECK(b.rows()[0][j] >= 0);
      CHECK(b.rows()[0][j] < cfg.prime);
    }
    CHECK(sample_gm_lattice(cfg, t) == b);
  }
  CHECK_FALSE(sample_gm_lattice(cfg, 0) == sample_gm_lattice(cfg, 1));

  const LatticeBasis small = gm_lattice_from_multipliers(5, {BigInt(2)});
  CHECK(small.rows() == IntMatrix{{1, 2}, {0, 5}});
  CHECK(small.raw_det() == 5);

  // Brute force: x is in the lattice iff x_2 = 2 x_1 mod 5.
  long best = -1;
  for (long x1 = -5; x1 <= 5; ++x1) {
    for (long x2 = -5; x2 <= 5; ++x2) {
      if ((x1 == 0 && x2 == 0) || ((x2 - 2 * x1) % 5 + 5) % 5 != 0) continue;
      const long nsq = x1 * x1 + x2 * x2;
      if (best < 0 || nsq < best) best = nsq;
    }
  }
  CHECK(best == 5);
  const VolumeSequence first = first_volumes(small, 1);
  CHECK(first.entries[0].raw_norm_sq == best);
}

TEST_CASE("Poisson samples") {
  for (std::uint64_t t = 0; t < 200; ++t) {
    const PoissonSample s = sample_poisson(20.0, 4, t);
    CHECK(s.intensity == 0.5);
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      CHECK(s.points[i] > 0.0);
      CHECK(s.points[i] <= 20.0);
      if (i > 0) CHECK(s.points[i] > s.points[i - 1]);
    }
  }
  int empty = 0;
  for (std::uint64_t t = 0; t < 1000; ++t) empty += sample_poisson(1e-6, 1, t).points.empty();
  CHECK(empty >= 995);

  // 10^5 trials at horizon 4: mean and variance 2.
  const int n = 100000;
  double sum = 0.0;
  double sq = 0.0;
  for (int t = 0; t < n; ++t) {
    const double c = static_cast<double>(sample_poisson(4.0, 17, t).points.size());
    sum += c;
    sq += c * c;
  }
  const double mean = sum / n;
  const double var = (sq - n * mean * mean) / (n - 1);
  CHECK(std::fabs(mean - 2.0) < 4.0 * std::sqrt(2.0 / n));
  CHECK(var == doctest::Approx(2.0).epsilon(0.03));
  CHECK_THROWS_AS(sample_poisson(0.0, 1, 1), std::invalid_argument);
}

}  // TEST_SUITE
