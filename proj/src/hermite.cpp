#include <stdexcept>

#include "latpois/lattice.hpp"

namespace latpois {

IntMatrix hermite_normal_form(IntMatrix a) {
  const std::size_t n = a.size();
  for (const auto& row : a) {
    if (row.size() != n) throw std::invalid_argument("hermite_normal_form: matrix is not square");
  }
  auto sub_multiple = [&](std::size_t dst, std::size_t src, const BigInt& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < n; ++j) a[dst][j] -= q * a[src][j];
  };
  for (std::size_t c = 0; c < n; ++c) {
    // Euclid on column c over rows c..n-1 until only row c is nonzero there.
    for (;;) {
      std::size_t best = n;
      for (std::size_t i = c; i < n; ++i) {
        if (a[i][c] != 0 && (best == n || abs(a[i][c]) < abs(a[best][c]))) best = i;
      }
      if (best == n) throw std::invalid_argument("hermite_normal_form: matrix is singular");
      std::swap(a[c], a[best]);
      bool done = true;
      for (std::size_t i = c + 1; i < n; ++i) {
        if (a[i][c] == 0) continue;
        BigInt q;
        mpz_fdiv_q(q.get_mpz_t(), a[i][c].get_mpz_t(), a[c][c].get_mpz_t());
        sub_multiple(i, c, q);
        if (a[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (a[c][c] < 0) {
      for (auto& v : a[c]) v = -v;
    }
    for (std::size_t i = 0; i < c; ++i) {
      BigInt q;
      mpz_fdiv_q(q.get_mpz_t(), a[i][c].get_mpz_t(), a[c][c].get_mpz_t());
      sub_multiple(i, c, q);
    }
  }
  return a;
}

}  // namespace latpois
