#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "latpois/shortvec.hpp"

namespace latpois {

namespace {

struct Overflow {};

// Integer kernels for the floating-point reduction. The int64 kernel signals
// Overflow and the caller restarts on arbitrary-precision integers.
struct Int64Ops {
  using T = std::int64_t;
  static long double approx(T v) { return static_cast<long double>(v); }
  static T from_round(long double x) {
    const long double r = std::nearbyint(x);
    if (std::fabs(r) >= 0x1.0p62L) throw Overflow{};
    return static_cast<T>(r);
  }
  static void sub_mul(T& dst, T q, T src) {
    T prod = 0;
    if (__builtin_mul_overflow(q, src, &prod) || __builtin_sub_overflow(dst, prod, &dst)) throw Overflow{};
  }
  static T from_big(const BigInt& v) {
    if (!mpz_fits_slong_p(v.get_mpz_t()) || sizeof(long) != 8) throw Overflow{};
    return v.get_si();
  }
  static BigInt to_big(T v) { return BigInt(static_cast<long>(v)); }
};

struct BigOps {
  using T = BigInt;
  static long double approx(const T& v) { return static_cast<long double>(v.get_d()); }
  static T from_round(long double x) { return BigInt(static_cast<double>(std::nearbyint(x))); }
  static void sub_mul(T& dst, const T& q, const T& src) { dst -= q * src; }
  static const T& from_big(const BigInt& v) { return v; }
  static const BigInt& to_big(const T& v) { return v; }
};

struct PrecisionLoss {};

template <class Ops>
class FloatLll {
  using T = typename Ops::T;
  using Mat = std::vector<std::vector<T>>;

 public:
  FloatLll(const IntMatrix& rows, double delta) : n_(static_cast<int>(rows.size())), delta_(delta) {
    b_.resize(n_);
    u_.assign(n_, std::vector<T>(n_, T(0)));
    bf_.assign(n_, std::vector<long double>(n_));
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) b_[i].push_back(Ops::from_big(rows[i][j]));
      u_[i][i] = T(1);
      refresh(i);
    }
    mu_.assign(n_, std::vector<long double>(n_, 0.0L));
    r_.assign(n_, std::vector<long double>(n_, 0.0L));
    bstar_.assign(n_, 0.0L);
  }

  void run() {
    gso_row(0);
    int k = 1;
    std::uint64_t steps = 0;
    const std::uint64_t max_steps = 1'000'000ULL * static_cast<std::uint64_t>(n_);
    while (k < n_) {
      if (++steps > max_steps) throw PrecisionLoss{};
      size_reduce(k);
      const long double m = mu_[k][k - 1];
      if (bstar_[k] < (delta_ - m * m) * bstar_[k - 1]) {
        std::swap(b_[k], b_[k - 1]);
        std::swap(u_[k], u_[k - 1]);
        std::swap(bf_[k], bf_[k - 1]);
        k = std::max(k - 1, 1);
        if (k == 1) gso_row(0);
      } else {
        ++k;
      }
    }
  }

  IntMatrix rows() const { return export_mat(b_); }
  IntMatrix transform() const { return export_mat(u_); }

 private:
  static IntMatrix export_mat(const Mat& m) {
    IntMatrix out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (const auto& v : m[i]) out[i].push_back(Ops::to_big(v));
    }
    return out;
  }

  void refresh(int i) {
    for (int j = 0; j < n_; ++j) bf_[i][j] = Ops::approx(b_[i][j]);
  }

  long double dot(int a, int b) const {
    long double s = 0.0L;
    for (int j = 0; j < n_; ++j) s += bf_[a][j] * bf_[b][j];
    return s;
  }

  void gso_row(int k) {
    for (int j = 0; j < k; ++j) {
      long double v = dot(k, j);
      for (int i = 0; i < j; ++i) v -= mu_[j][i] * r_[k][i];
      r_[k][j] = v;
      mu_[k][j] = v / bstar_[j];
    }
    long double s = dot(k, k);
    for (int j = 0; j < k; ++j) s -= mu_[k][j] * r_[k][j];
    if (!(s > 0.0L)) throw PrecisionLoss{};
    bstar_[k] = s;
  }

  void size_reduce(int k) {
    for (int pass = 0;; ++pass) {
      if (pass > 64) throw PrecisionLoss{};
      gso_row(k);
      bool changed = false;
      for (int j = k - 1; j >= 0; --j) {
        if (std::fabs(mu_[k][j]) <= 0.51L) continue;
        const T q = Ops::from_round(mu_[k][j]);
        const long double qf = std::nearbyint(mu_[k][j]);
        for (int c = 0; c < n_; ++c) {
          Ops::sub_mul(b_[k][c], q, b_[j][c]);
          Ops::sub_mul(u_[k][c], q, u_[j][c]);
        }
        for (int i = 0; i < j; ++i) mu_[k][i] -= qf * mu_[j][i];
        mu_[k][j] -= qf;
        changed = true;
      }
      if (!changed) return;
      refresh(k);
    }
  }

  int n_;
  long double delta_;
  Mat b_;
  Mat u_;
  std::vector<std::vector<long double>> bf_;
  std::vector<std::vector<long double>> mu_;
  std::vector<std::vector<long double>> r_;
  std::vector<long double> bstar_;
};

BigInt dot(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  BigInt s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Integral Gram-Schmidt data: d[i] = prod_{j<i} |b*_j|^2 (d[0] = 1) and
// lambda[k][j] = d[j+1] * mu_kj, all exact integers.
struct IntegralGso {
  std::vector<BigInt> d;
  std::vector<std::vector<BigInt>> lambda;

  explicit IntegralGso(int n) : d(n + 1, 0), lambda(n, std::vector<BigInt>(n, 0)) { d[0] = 1; }

  void compute_row(const IntMatrix& b, int k) {
    for (int j = 0; j <= k; ++j) {
      BigInt u = dot(b[k], b[j]);
      for (int i = 0; i < j; ++i) {
        u = d[i + 1] * u - lambda[k][i] * lambda[j][i];
        mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), d[i].get_mpz_t());
      }
      if (j < k) {
        lambda[k][j] = std::move(u);
      } else {
        if (u <= 0) throw std::invalid_argument("LLL: basis vectors are linearly dependent");
        d[k + 1] = std::move(u);
      }
    }
  }
};

// Lovasz condition fails: d[k+1] d[k-1] < delta d[k]^2 - lambda_{k,k-1}^2.
bool lovasz_fails(const IntegralGso& g, int k, const Rational& delta) {
  const BigInt& lam = g.lambda[k][k - 1];
  const BigInt lhs = delta.get_den() * (g.d[k + 1] * g.d[k - 1] + lam * lam);
  const BigInt rhs = delta.get_num() * g.d[k] * g.d[k];
  return lhs < rhs;
}

// Size-reduces b_k against b_l exactly.
void exact_reduce(IntMatrix& b, IntMatrix& u, IntegralGso& g, int k, int l) {
  const BigInt& dl = g.d[l + 1];
  BigInt twice = 2 * g.lambda[k][l];
  if (abs(twice) <= dl) return;
  // q = round(lambda / d) = floor((2 lambda + d) / (2 d))
  BigInt q = twice + dl;
  const BigInt den = 2 * dl;
  mpz_fdiv_q(q.get_mpz_t(), q.get_mpz_t(), den.get_mpz_t());
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    b[k][c] -= q * b[l][c];
    u[k][c] -= q * u[l][c];
  }
  g.lambda[k][l] -= q * dl;
  for (int i = 0; i < l; ++i) g.lambda[k][i] -= q * g.lambda[l][i];
}

void exact_swap(IntMatrix& b, IntMatrix& u, IntegralGso& g, int k, int kmax) {
  std::swap(b[k], b[k - 1]);
  std::swap(u[k], u[k - 1]);
  for (int j = 0; j < k - 1; ++j) std::swap(g.lambda[k][j], g.lambda[k - 1][j]);
  const BigInt lam = g.lambda[k][k - 1];
  BigInt bnew = g.d[k - 1] * g.d[k + 1] + lam * lam;
  mpz_divexact(bnew.get_mpz_t(), bnew.get_mpz_t(), g.d[k].get_mpz_t());
  for (int i = k + 1; i <= kmax; ++i) {
    const BigInt t = g.lambda[i][k];
    BigInt a = g.d[k + 1] * g.lambda[i][k - 1] - lam * t;
    mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), g.d[k].get_mpz_t());
    g.lambda[i][k] = a;
    BigInt c = bnew * t + lam * g.lambda[i][k];
    mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.d[k + 1].get_mpz_t());
    g.lambda[i][k - 1] = std::move(c);
  }
  g.d[k] = std::move(bnew);
}

// Integral LLL (all arithmetic exact); b and u updated in place.
void exact_lll(IntMatrix& b, IntMatrix& u, const Rational& delta) {
  const int n = static_cast<int>(b.size());
  IntegralGso g(n);
  g.compute_row(b, 0);
  int k = 1;
  int kmax = 0;
  while (k < n) {
    if (k > kmax) {
      kmax = k;
      g.compute_row(b, k);
    }
    exact_reduce(b, u, g, k, k - 1);
    if (lovasz_fails(g, k, delta)) {
      exact_swap(b, u, g, k, kmax);
      k = std::max(k - 1, 1);
    } else {
      for (int l = k - 2; l >= 0; --l) exact_reduce(b, u, g, k, l);
      ++k;
    }
  }
}

IntMatrix identity(int n) {
  IntMatrix m(n, std::vector<BigInt>(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

bool fits_double_range(const IntMatrix& m) {
  for (const auto& row : m) {
    for (const auto& v : row) {
      if (mpz_sizeinbase(v.get_mpz_t(), 2) > 900) return false;
    }
  }
  return true;
}

template <class Ops>
bool try_float_lll(const IntMatrix& rows, double delta, IntMatrix& out_rows, IntMatrix& out_u) {
  FloatLll<Ops> lll(rows, delta);
  lll.run();
  out_rows = lll.rows();
  out_u = lll.transform();
  return true;
}

}  // namespace

ReducedBasis lll_reduce(const LatticeBasis& b, const LllOptions& opts) {
  if (!(opts.delta > 0.25 && opts.delta < 1.0)) {
    throw std::invalid_argument("lll_reduce: delta must lie in (1/4, 1)");
  }
  const int n = b.dim();
  ReducedBasis out;
  out.delta = opts.delta;
  // Slightly stronger target in floating point so the exact pass rarely swaps.
  const double float_delta = opts.delta + 0.25 * (1.0 - opts.delta);

  bool have_float = false;
  if (fits_double_range(b.rows())) {
    try {
      have_float = try_float_lll<Int64Ops>(b.rows(), float_delta, out.rows, out.transform);
    } catch (const Overflow&) {
    } catch (const PrecisionLoss&) {
    }
    if (!have_float) {
      try {
        have_float = try_float_lll<BigOps>(b.rows(), float_delta, out.rows, out.transform);
      } catch (const PrecisionLoss&) {
      }
    }
  }
  if (!have_float) {
    out.rows = b.rows();
    out.transform = identity(n);
  }
  if (opts.certify || !have_float) {
    exact_lll(out.rows, out.transform, Rational(opts.delta));
  }
  return out;
}

bool is_lll_reduced(const IntMatrix& rows, double delta) {
  const int n = static_cast<int>(rows.size());
  if (n == 0) return true;
  IntegralGso g(n);
  for (int k = 0; k < n; ++k) g.compute_row(rows, k);
  const Rational d(delta);
  for (int k = 1; k < n; ++k) {
    for (int j = 0; j < k; ++j) {
      if (abs(2 * g.lambda[k][j]) > g.d[j + 1]) return false;
    }
    if (lovasz_fails(g, k, d)) return false;
  }
  return true;
}

}  // namespace latpois
