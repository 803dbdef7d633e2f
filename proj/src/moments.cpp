#include "latpois/moments.hpp"

#include <stdexcept>
#include <string>

namespace latpois {

namespace {

void check_k(int k, int k_max) {
  if (k < 1) throw std::invalid_argument("moment order k must be >= 1");
  if (k > k_max) {
    throw std::invalid_argument("moment order k = " + std::to_string(k) + " exceeds k_max = " + std::to_string(k_max));
  }
}

BigInt ipow(long base, long exp) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(exp));
  return r;
}

bool strictly_increasing_in_range(const std::vector<int>& v, int k) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 1 || v[i] > k) return false;
    if (i > 0 && v[i] <= v[i - 1]) return false;
  }
  return true;
}

Rational product_of(const MomentSpec& s, const std::vector<int>& indices) {
  Rational p = 1;
  for (int j : indices) p *= s.volumes[j - 1];
  return p;
}

}  // namespace

void Division::validate() const {
  if (k < 1) throw std::invalid_argument("division: k must be >= 1");
  if (m() < 1 || m() > k) throw std::invalid_argument("division: m out of range");
  if (!strictly_increasing_in_range(nu, k) || !strictly_increasing_in_range(mu, k)) {
    throw std::invalid_argument("division: nu and mu must be strictly increasing within 1..k");
  }
  if (nu.size() + mu.size() != static_cast<std::size_t>(k)) {
    throw std::invalid_argument("division: nu and mu must cover 1..k");
  }
  std::vector<bool> seen(k + 1, false);
  for (int j : nu) seen[j] = true;
  for (int j : mu) {
    if (seen[j]) throw std::invalid_argument("division: nu and mu overlap");
    seen[j] = true;
  }
}

std::vector<Division> enumerate_divisions(int k) {
  if (k < 1) throw std::invalid_argument("enumerate_divisions: k must be >= 1");
  std::vector<Division> out;
  for (int m = 1; m <= k - 1; ++m) {
    // Lexicographic m-subsets of {1..k}.
    std::vector<int> nu(m);
    for (int i = 0; i < m; ++i) nu[i] = i + 1;
    for (;;) {
      Division d;
      d.k = k;
      d.nu = nu;
      for (int j = 1, next = 0; j <= k; ++j) {
        if (next < m && nu[next] == j) {
          ++next;
        } else {
          d.mu.push_back(j);
        }
      }
      out.push_back(std::move(d));
      int i = m - 1;
      while (i >= 0 && nu[i] == k - m + i + 1) --i;
      if (i < 0) break;
      ++nu[i];
      for (int j = i + 1; j < m; ++j) nu[j] = nu[j - 1] + 1;
    }
  }
  return out;
}

bool is_admissible(const AdmissibleMatrix& d) {
  const Division& div = d.division;
  const int m = div.m();
  const int k = div.k;
  if (static_cast<int>(d.entries.size()) != m) return false;
  for (const auto& row : d.entries) {
    if (static_cast<int>(row.size()) != k) return false;
    for (int v : row) {
      if (v < -1 || v > 1) return false;
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (d.at(i, div.nu[j]) != (i == j ? 1 : 0)) return false;
    }
    for (int mu_l : div.mu) {
      if (mu_l < div.nu[i] && d.at(i, mu_l) != 0) return false;
    }
  }
  for (int col = 1; col <= k; ++col) {
    int nonzero = 0;
    for (int i = 0; i < m; ++i) nonzero += d.at(i, col) != 0;
    if (nonzero != 1) return false;
  }
  return true;
}

std::uint64_t for_each_admissible(const Division& d, const std::function<void(const AdmissibleMatrix&)>& fn) {
  d.validate();
  const int m = d.m();
  // Candidate columns for each mu_l, from all 3^m vectors over {-1,0,1}.
  std::vector<std::vector<std::vector<int>>> candidates;
  for (int mu_l : d.mu) {
    std::vector<std::vector<int>> ok;
    std::vector<int> col(m, -1);
    for (;;) {
      int nonzero = 0;
      bool pattern_ok = true;
      for (int i = 0; i < m; ++i) {
        if (col[i] != 0) {
          ++nonzero;
          if (mu_l < d.nu[i]) pattern_ok = false;
        }
      }
      if (pattern_ok && nonzero == 1) ok.push_back(col);
      int i = 0;
      while (i < m && col[i] == 1) col[i++] = -1;
      if (i == m) break;
      ++col[i];
    }
    if (ok.empty()) return 0;
    candidates.push_back(std::move(ok));
  }

  AdmissibleMatrix a;
  a.division = d;
  a.entries.assign(m, std::vector<int>(d.k, 0));
  for (int i = 0; i < m; ++i) a.entries[i][d.nu[i] - 1] = 1;
  std::vector<std::size_t> pick(candidates.size(), 0);
  std::uint64_t visited = 0;
  for (;;) {
    for (std::size_t l = 0; l < candidates.size(); ++l) {
      const auto& col = candidates[l][pick[l]];
      for (int i = 0; i < m; ++i) a.entries[i][d.mu[l] - 1] = col[i];
    }
    fn(a);
    ++visited;
    std::size_t l = 0;
    while (l < pick.size() && pick[l] + 1 == candidates[l].size()) pick[l++] = 0;
    if (l == pick.size()) break;
    ++pick[l];
  }
  return visited;
}

std::vector<AdmissibleMatrix> enumerate_admissible(const Division& d) {
  std::vector<AdmissibleMatrix> out;
  for_each_admissible(d, [&](const AdmissibleMatrix& a) {
    if (!is_admissible(a)) throw std::logic_error("enumerate_admissible produced an inadmissible matrix");
    out.push_back(a);
  });
  return out;
}

BigInt count_admissible(const Division& d) {
  d.validate();
  BigInt count = 1;
  for (int mu_l : d.mu) {
    long rows = 0;
    for (int nu_i : d.nu) rows += nu_i < mu_l;
    count *= 2 * rows;
  }
  return count;
}

BigInt closed_form_M(const Division& d) {
  d.validate();
  if (d.nu.front() != 1) throw std::domain_error("closed_form_M: defined only for nu_1 = 1");
  const int k = d.k;
  const int m = d.m();
  BigInt value = ipow(2, k - m);
  for (int j = 2; j <= m - 1; ++j) value *= ipow(j, d.nu[j] - d.nu[j - 1] - 1);  // nu_{j+1} - nu_j - 1
  value *= ipow(m, k - d.nu[m - 1]);
  return value;
}

void SetPartition::validate() const {
  if (k < 1) throw std::invalid_argument("partition: k must be >= 1");
  std::vector<bool> seen(k + 1, false);
  int prev_min = 0;
  for (const auto& b : blocks) {
    if (b.empty() || !strictly_increasing_in_range(b, k)) {
      throw std::invalid_argument("partition: blocks must be nonempty, sorted, within 1..k");
    }
    if (b.front() <= prev_min) throw std::invalid_argument("partition: blocks must be ordered by minimum");
    prev_min = b.front();
    for (int j : b) {
      if (seen[j]) throw std::invalid_argument("partition: blocks overlap");
      seen[j] = true;
    }
  }
  for (int j = 1; j <= k; ++j) {
    if (!seen[j]) throw std::invalid_argument("partition: blocks do not cover 1..k");
  }
}

std::vector<SetPartition> enumerate_partitions(int k, int k_max) {
  check_k(k, k_max);
  std::vector<SetPartition> out;
  for_each_partition(k, [&](const SetPartition& p) { out.push_back(p); });
  return out;
}

MomentSpec MomentSpec::make(std::vector<Rational> volumes) {
  if (volumes.empty()) throw std::invalid_argument("moment spec needs at least one volume");
  for (std::size_t i = 0; i < volumes.size(); ++i) {
    volumes[i].canonicalize();
    if (volumes[i] <= 0) throw std::invalid_argument("moment spec volumes must be positive");
    if (i > 0 && volumes[i] < volumes[i - 1]) {
      throw std::invalid_argument("moment spec volumes must be sorted nondecreasingly");
    }
  }
  return MomentSpec{std::move(volumes)};
}

Rational limit_moment_matrix_form(const MomentSpec& s, int k_max) {
  check_k(s.k(), k_max);
  Rational total = 1;
  for (const auto& v : s.volumes) total *= v;
  for (const auto& d : enumerate_divisions(s.k())) {
    const BigInt count = count_admissible(d);
    if (count == 0) continue;
    total += Rational(count) * product_of(s, d.nu);
  }
  return total;
}

Rational limit_moment_partition_form(const MomentSpec& s, int k_max) {
  check_k(s.k(), k_max);
  Rational total = 0;
  for_each_partition(s.k(), [&](const SetPartition& p) {
    Rational term = 1;
    for (const auto& b : p.blocks) term *= s.volumes[b.front() - 1];
    mpq_div_2exp(term.get_mpq_t(), term.get_mpq_t(), static_cast<mp_bitcnt_t>(p.blocks.size()));
    total += term;
  });
  return total;
}

Rational pair_moment(const MomentSpec& s, int k_max) {
  Rational r = limit_moment_matrix_form(s, k_max);
  mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(s.k()));
  return r;
}

AdmissibleMatrix identity_matrix(int k) {
  AdmissibleMatrix a;
  a.division.k = k;
  for (int j = 1; j <= k; ++j) a.division.nu.push_back(j);
  a.entries.assign(k, std::vector<int>(k, 0));
  for (int i = 0; i < k; ++i) a.entries[i][i] = 1;
  return a;
}

SetPartition bijection_g(const AdmissibleMatrix& d) {
  d.division.validate();
  for (const auto& row : d.entries) {
    for (int v : row) {
      if (v < 0) throw std::invalid_argument("bijection_g: defined on nonnegative matrices only");
    }
  }
  const bool identity = d.division.m() == d.division.k && d == identity_matrix(d.division.k);
  if (!identity && !is_admissible(d)) throw std::invalid_argument("bijection_g: matrix is not admissible");
  SetPartition p;
  p.k = d.division.k;
  for (const auto& row : d.entries) {
    std::vector<int> block;
    for (int j = 1; j <= p.k; ++j) {
      if (row[j - 1] != 0) block.push_back(j);
    }
    p.blocks.push_back(std::move(block));
  }
  p.validate();
  return p;
}

AdmissibleMatrix bijection_g_inverse(const SetPartition& p) {
  p.validate();
  AdmissibleMatrix a;
  a.division.k = p.k;
  std::vector<bool> is_min(p.k + 1, false);
  for (const auto& b : p.blocks) {
    a.division.nu.push_back(b.front());
    is_min[b.front()] = true;
  }
  for (int j = 1; j <= p.k; ++j) {
    if (!is_min[j]) a.division.mu.push_back(j);
  }
  a.entries.assign(p.blocks.size(), std::vector<int>(p.k, 0));
  for (std::size_t i = 0; i < p.blocks.size(); ++i) {
    for (int j : p.blocks[i]) a.entries[i][j - 1] = 1;
  }
  return a;
}

std::vector<AdmissibleMatrix> enumerate_nonnegative_class(int k) {
  std::vector<AdmissibleMatrix> out;
  for (const auto& d : enumerate_divisions(k)) {
    for_each_admissible(d, [&](const AdmissibleMatrix& a) {
      bool nonnegative = true;
      for (const auto& row : a.entries) {
        for (int v : row) nonnegative = nonnegative && v >= 0;
      }
      if (nonnegative) out.push_back(a);
    });
  }
  out.push_back(identity_matrix(k));
  return out;
}

BigInt stirling2(int k, int j) {
  if (k < 0 || j < 0) throw std::invalid_argument("stirling2: negative argument");
  // S(i, r) = r S(i-1, r) + S(i-1, r-1)
  std::vector<BigInt> row(j + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= k; ++i) {
    for (int r = std::min(i, j); r >= 1; --r) row[r] = r * row[r] + row[r - 1];
    row[0] = 0;
  }
  return row[j];
}

BigInt bell_number(int k) {
  BigInt total = 0;
  for (int j = 0; j <= k; ++j) total += stirling2(k, j);
  return total;
}

Rational touchard_poisson_moment(int k, const Rational& lambda) {
  if (k < 1) throw std::invalid_argument("touchard_poisson_moment: k must be >= 1");
  if (lambda <= 0) throw std::invalid_argument("touchard_poisson_moment: lambda must be positive");
  Rational total = 0;
  Rational power = 1;
  for (int j = 1; j <= k; ++j) {
    power *= lambda;
    total += Rational(stirling2(k, j)) * power;
  }
  return total;
}

}  // namespace latpois
