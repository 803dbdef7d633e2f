#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "latpois/lattice.hpp"

namespace latpois {

/// Largest k accepted by the exhaustive moment routines (Bell(10) = 115975).
inline constexpr int kDefaultKMax = 10;

/*
 * A division (nu, mu) of {1..k} into two strictly increasing, disjoint
 * sequences covering {1..k}. Indices are 1-based, as in the moment formulas.
 * m = |nu| is normally in [1, k-1]; m == k (nu = 1..k, mu empty) is the
 * identity augmentation used by the matrix/partition bijection.
 */
struct Division {
  int k = 0;
  std::vector<int> nu;
  std::vector<int> mu;

  int m() const { return static_cast<int>(nu.size()); }
  /// Throws std::invalid_argument unless the invariants hold.
  void validate() const;
  friend bool operator==(const Division&, const Division&) = default;
};

/// All divisions with 1 <= m <= k-1: ordered by m, then nu lexicographically.
std::vector<Division> enumerate_divisions(int k);

/*
 * m x k matrix over {-1, 0, 1} of the main-term class: d[i][nu_j] = delta_ij,
 * d[i][mu_l] = 0 whenever mu_l < nu_i, exactly one nonzero entry per column.
 */
struct AdmissibleMatrix {
  Division division;
  std::vector<std::vector<int>> entries;  // entries[i][j - 1] for column j

  int at(int row, int column) const { return entries[row][column - 1]; }
  friend bool operator==(const AdmissibleMatrix&, const AdmissibleMatrix&) = default;
};

/// Checks every admissibility condition directly on the entries.
bool is_admissible(const AdmissibleMatrix& d);

/// Brute force: for every mu column tries all {-1,0,1}^m column vectors and
/// keeps the admissible ones, then takes the cartesian product.
std::vector<AdmissibleMatrix> enumerate_admissible(const Division& d);

/// Streams the same matrices as enumerate_admissible; the argument is reused
/// between calls. Returns the number visited.
std::uint64_t for_each_admissible(const Division& d, const std::function<void(const AdmissibleMatrix&)>& fn);

/// prod over mu_l of 2 * #{i : nu_i < mu_l}.
BigInt count_admissible(const Division& d);

/// 2^(k-m) * (prod_{j=2}^{m-1} j^(nu_{j+1} - nu_j - 1)) * m^(k - nu_m).
/// Only defined for nu_1 == 1; throws std::domain_error otherwise.
BigInt closed_form_M(const Division& d);

struct SetPartition {
  int k = 0;
  std::vector<std::vector<int>> blocks;  // 1-based, each sorted, blocks ordered by minimum

  void validate() const;
  friend bool operator==(const SetPartition&, const SetPartition&) = default;
};

/// All Bell(k) partitions of {1..k} in restricted-growth-string order.
std::vector<SetPartition> enumerate_partitions(int k, int k_max = kDefaultKMax);

/// Visits each partition without materialising the list.
template <class Fn>
void for_each_partition(int k, Fn&& fn);

struct MomentSpec {
  std::vector<Rational> volumes;  // 0 < V_1 <= ... <= V_k

  int k() const { return static_cast<int>(volumes.size()); }
  /// Validates k >= 1, positivity and ordering.
  static MomentSpec make(std::vector<Rational> volumes);
};

/// Limit of E(prod N_j) over random lattices: prod V_j + sum_(nu,mu) M_(nu,mu) prod V_(nu_i).
Rational limit_moment_matrix_form(const MomentSpec& s, int k_max = kDefaultKMax);

/// E(prod N(V_j)) for the intensity-1/2 Poisson process: sum over partitions
/// P of 2^(-#P) prod_{B in P} V_(min B).
Rational limit_moment_partition_form(const MomentSpec& s, int k_max = kDefaultKMax);

/// Limit of E(prod Ntilde_j) for pair counts: 2^(-k) * matrix form.
Rational pair_moment(const MomentSpec& s, int k_max = kDefaultKMax);

/// Nonnegative admissible matrix (or the k x k identity) -> partition with
/// blocks B_i = {j : d_ij != 0}.
SetPartition bijection_g(const AdmissibleMatrix& d);
AdmissibleMatrix bijection_g_inverse(const SetPartition& p);

/// The k x k identity with nu = (1..k), mu empty.
AdmissibleMatrix identity_matrix(int k);

/// Nonnegative members of the main-term class over all divisions, plus I_k.
std::vector<AdmissibleMatrix> enumerate_nonnegative_class(int k);

BigInt stirling2(int k, int j);
BigInt bell_number(int k);

/// k-th raw moment of Poisson(lambda): sum_j S(k, j) lambda^j.
Rational touchard_poisson_moment(int k, const Rational& lambda);

// --- template implementation ---

template <class Fn>
void for_each_partition(int k, Fn&& fn) {
  // Restricted growth strings a[0..k-1]: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
  std::vector<int> a(k, 0);
  std::vector<int> prefix_max(k, 0);
  SetPartition p;
  p.k = k;
  for (;;) {
    int blocks = prefix_max[k - 1] + 1;
    p.blocks.assign(blocks, {});
    for (int i = 0; i < k; ++i) p.blocks[a[i]].push_back(i + 1);
    fn(static_cast<const SetPartition&>(p));
    int i = k - 1;
    while (i > 0 && a[i] == prefix_max[i - 1] + 1) --i;
    if (i == 0) return;
    ++a[i];
    prefix_max[i] = std::max(prefix_max[i - 1], a[i]);
    for (int j = i + 1; j < k; ++j) {
      a[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
}

}  // namespace latpois
