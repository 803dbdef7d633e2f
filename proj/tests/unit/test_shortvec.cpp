#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "../support/brute_force.hpp"
#include "latpois/sampler.hpp"
#include "latpois/shortvec.hpp"

using namespace latpois;

namespace {

IntMatrix identity(int n) {
  IntMatrix m(n, std::vector<BigInt>(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix c(a.size(), std::vector<BigInt>(b[0].size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
    }
  }
  return c;
}

double up(double x) { return std::nextafter(x, INFINITY); }

std::vector<oracle::Pair> as_pairs(const VolumeSequence& seq) {
  std::vector<oracle::Pair> out;
  for (const auto& e : seq.entries) {
    std::vector<long> rep;
    for (const auto& v : e.representative) rep.push_back(v.get_si());
    out.emplace_back(e.raw_norm_sq.get_si(), rep);
  }
  return out;
}

}  // namespace

TEST_SUITE("shortvec") {

TEST_CASE("LLL on the identity is a no-op") {
  const auto r = lll_reduce(LatticeBasis::from_rows(identity(4)));
  CHECK(r.rows == identity(4));
  CHECK(r.transform == identity(4));
}

TEST_CASE("LLL on a skewed basis of Z^2") {
  const auto b = LatticeBasis::from_rows(IntMatrix{{1, 1000000}, {0, 1}});
  const auto r = lll_reduce(b);
  for (const auto& row : r.rows) {
    for (const auto& v : row) CHECK(abs(v) <= 1);
  }
  CHECK(same_lattice(r.rows, identity(2)));
  CHECK(is_lll_reduced(r.rows, 0.99));
  CHECK_FALSE(is_lll_reduced(b.rows(), 0.99));
}

TEST_CASE("LLL on GM lattices") {
  const GMConfig cfg = GMConfig::make(10, default_prime(3), 3);
  for (std::uint64_t t = 0; t < 5; ++t) {
    const auto b = sample_gm_lattice(cfg, t);
    const auto r = lll_reduce(b);
    CHECK(same_lattice(r.rows, b.rows()));
    CHECK(is_lll_reduced(r.rows, 0.99));
    CHECK(abs(determinant(r.transform)) == 1);
    CHECK(multiply(r.transform, b.rows()) == r.rows);
  }
  CHECK_THROWS_AS(lll_reduce(sample_gm_lattice(cfg, 0), LllOptions{0.2, true}), std::invalid_argument);
}

TEST_CASE("LLL with 64-bit overflow falls back to exact arithmetic") {
  const BigInt p("1000000000000000000000007");
  const auto b = gm_lattice_from_multipliers(p, {BigInt("123456789012345678901234"), BigInt("98765432109876543210")});
  const auto r = lll_reduce(b);
  CHECK(same_lattice(r.rows, b.rows()));
  CHECK(is_lll_reduced(r.rows, 0.99));
}

TEST_CASE("enumeration of Z^2 and Z^3") {
  const auto z2 = LatticeBasis::from_rows(identity(2));
  const auto s2 = enumerate_up_to_volume(z2, up(std::numbers::pi));
  REQUIRE(s2.entries.size() == 2);
  for (const auto& e : s2.entries) {
    CHECK(e.raw_norm_sq == 1);
    CHECK(e.volume == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    CHECK(e.multiplicity == 1);
  }
  CHECK(s2.entries[0].representative == std::vector<BigInt>{0, 1});
  CHECK(s2.entries[1].representative == std::vector<BigInt>{1, 0});
  CHECK(enumerate_up_to_volume(z2, 3.0).entries.empty());

  const auto z3 = LatticeBasis::from_rows(identity(3));
  const double t = up(ball_volume_coeff(3) * std::pow(3.0, 1.5) * (1 + 1e-14));
  const auto s3 = enumerate_up_to_volume(z3, t);
  REQUIRE(s3.entries.size() == 13);
  int by_norm[4] = {0, 0, 0, 0};
  for (const auto& e : s3.entries) ++by_norm[e.raw_norm_sq.get_si()];
  CHECK(by_norm[1] == 3);
  CHECK(by_norm[2] == 6);
  CHECK(by_norm[3] == 4);
  CHECK(as_pairs(s3) == oracle::brute_force_pairs(z3, 3));
}

TEST_CASE("first volumes") {
  const auto z2 = LatticeBasis::from_rows(identity(2));
  const auto f = first_volumes(z2, 2);
  REQUIRE(f.entries.size() == 2);
  CHECK(f.entries[0].volume == doctest::Approx(std::numbers::pi));
  CHECK(f.entries[1].volume == doctest::Approx(std::numbers::pi));
  CHECK(f.first_n_mode());
  CHECK(f.complete_up_to() == f.entries[1].volume);
  CHECK_THROWS_AS(first_volumes(z2, 0), std::invalid_argument);

  const GMConfig cfg = GMConfig::make(8, default_prime(1), 1);
  for (std::uint64_t t = 0; t < 5; ++t) {
    const auto b = sample_gm_lattice(cfg, t);
    const auto f25 = first_volumes(b, 25);
    REQUIRE(f25.entries.size() == 25);
    const auto v = f25.volumes();
    CHECK(std::is_sorted(v.begin(), v.end()));
    const auto full = enumerate_up_to_volume(b, up(v.back()) * 1.01);
    REQUIRE(full.entries.size() >= 25);
    CHECK(full.entries.front().raw_norm_sq == first_volumes(b, 1).entries.front().raw_norm_sq);
    for (std::size_t i = 0; i < 25; ++i) CHECK(full.entries[i].raw_norm_sq == f25.entries[i].raw_norm_sq);
  }
}

TEST_CASE("enumeration matches the brute-force box oracle") {
  for (std::uint64_t i = 0; i < 30; ++i) {
    const int n = 2 + static_cast<int>(i % 3);
    const auto b = oracle::random_basis(n, 3, 77, i);
    const long bound = 6 + static_cast<long>(i % 5);
    // A volume strictly between the shells bound and bound + 1.
    const double lo = length_to_volume(n, bound, b.raw_det());
    const double hi = length_to_volume(n, bound + 1, b.raw_det());
    const auto seq = enumerate_up_to_volume(b, 0.5 * (lo + hi));
    CHECK(as_pairs(seq) == oracle::brute_force_pairs(b, bound));
  }
}

TEST_CASE("enumeration bound and node budget") {
  const auto bound = EnumerationBound::make(2, up(std::numbers::pi), 1, 1e-9);
  CHECK(bound.raw_norm_sq_bound == doctest::Approx(1.0));
  CHECK(bound.accepts(2, 1, 1));
  CHECK_FALSE(bound.accepts(2, 2, 1));
  CHECK_THROWS_AS(EnumerationBound::make(2, 0.0, 1, 1e-9), std::invalid_argument);

  const GMConfig cfg = GMConfig::make(12, default_prime(2), 2);
  const auto b = sample_gm_lattice(cfg, 0);
  EnumerationOptions tight;
  tight.node_budget = 10;
  CHECK_THROWS_AS(enumerate_up_to_volume(b, 50.0, tight), BudgetExceeded);
  const Enumerator e(b);
  const auto seq = e.up_to_volume(8.0);
  CHECK(e.last_node_count() > 0);
  CHECK(e.predicted_nodes(raw_norm_sq_bound(12, 8.0, b.raw_det())) > 0.0);
  for (const auto& entry : seq.entries) CHECK(entry.volume <= 8.0);
  CHECK(seq.cutoff == 8.0);
}

}  // TEST_SUITE
