#pragma once

// Independent short-vector oracle: walks every integer point of the box
// |x|_inf <= sqrt(bound) and tests lattice membership via the integral dual.

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "latpois/lattice.hpp"
#include "latpois/sampler.hpp"

namespace oracle {

using latpois::BigInt;
using latpois::IntMatrix;
using latpois::LatticeBasis;

// (rawNormSq, canonical representative), sorted.
using Pair = std::pair<long, std::vector<long>>;

inline std::vector<Pair> brute_force_pairs(const LatticeBasis& b, long max_raw_norm_sq) {
  const int n = b.dim();
  const LatticeBasis d = latpois::dual_basis(b);
  const long det = b.raw_det().get_si();
  std::vector<std::vector<long>> dual(n, std::vector<long>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) dual[i][j] = d.rows()[i][j].get_si();
  }
  const long r = static_cast<long>(std::sqrt(static_cast<double>(max_raw_norm_sq))) + 1;
  std::vector<Pair> out;
  std::vector<long> x(n, -r);
  for (;;) {
    long nsq = 0;
    for (long v : x) nsq += v * v;
    bool canonical = false;
    for (long v : x) {
      if (v != 0) {
        canonical = v > 0;
        break;
      }
    }
    if (canonical && nsq <= max_raw_norm_sq) {
      bool member = true;
      for (int i = 0; i < n && member; ++i) {
        long s = 0;
        for (int j = 0; j < n; ++j) s += x[j] * dual[i][j];
        member = s % det == 0;
      }
      if (member) out.emplace_back(nsq, x);
    }
    int k = 0;
    while (k < n && x[k] == r) x[k++] = -r;
    if (k == n) break;
    ++x[k];
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Nonsingular n x n basis with entries in [-spread, spread].
inline LatticeBasis random_basis(int n, long spread, std::uint64_t seed, std::uint64_t index) {
  latpois::TrialRng rng(seed, index);
  for (;;) {
    IntMatrix rows(n, std::vector<BigInt>(n));
    for (auto& row : rows) {
      for (auto& v : row) v = static_cast<long>(rng.below(2 * spread + 1)) - spread;
    }
    if (latpois::determinant(rows) != 0) return LatticeBasis::from_rows(std::move(rows));
  }
}

}  // namespace oracle
