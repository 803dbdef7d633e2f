#include "latpois/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <mpfr.h>

namespace latpois {

namespace {

bool is_decimal_integer(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

double log_abs(const BigInt& x) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::numbers::ln2;
}

// RAII wrapper for a single MPFR value.
class HighPrecision {
 public:
  static constexpr mpfr_prec_t kBits = 256;
  HighPrecision() { mpfr_init2(v_, kBits); }
  ~HighPrecision() { mpfr_clear(v_); }
  HighPrecision(const HighPrecision&) = delete;
  HighPrecision& operator=(const HighPrecision&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

// log of kappa_n * raw_norm_sq^(n/2) / raw_det at 256 bits, written into out.
void high_precision_log_volume(mpfr_ptr out, int n, const BigInt& raw_norm_sq, const BigInt& raw_det) {
  HighPrecision tmp;
  HighPrecision half_n;
  mpfr_set_si(half_n.get(), n, MPFR_RNDN);
  mpfr_div_ui(half_n.get(), half_n.get(), 2, MPFR_RNDN);

  // (n/2) log(pi)
  mpfr_const_pi(out, MPFR_RNDN);
  mpfr_log(out, out, MPFR_RNDN);
  mpfr_mul(out, out, half_n.get(), MPFR_RNDN);
  // - lgamma(n/2 + 1)
  mpfr_add_ui(tmp.get(), half_n.get(), 1, MPFR_RNDN);
  mpfr_lngamma(tmp.get(), tmp.get(), MPFR_RNDN);
  mpfr_sub(out, out, tmp.get(), MPFR_RNDN);
  // + (n/2) log(raw_norm_sq)
  mpfr_set_z(tmp.get(), raw_norm_sq.get_mpz_t(), MPFR_RNDN);
  mpfr_log(tmp.get(), tmp.get(), MPFR_RNDN);
  mpfr_mul(tmp.get(), tmp.get(), half_n.get(), MPFR_RNDN);
  mpfr_add(out, out, tmp.get(), MPFR_RNDN);
  // - log(raw_det)
  mpfr_set_z(tmp.get(), raw_det.get_mpz_t(), MPFR_RNDN);
  mpfr_log(tmp.get(), tmp.get(), MPFR_RNDN);
  mpfr_sub(out, out, tmp.get(), MPFR_RNDN);
}

}  // namespace

BigInt parse_bigint(std::string_view text) {
  if (!is_decimal_integer(text)) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  if (text.front() == '+') text.remove_prefix(1);
  return BigInt(std::string(text), 10);
}

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_bigint(text));
  const BigInt num = parse_bigint(text.substr(0, slash));
  const auto den_text = text.substr(slash + 1);
  if (!den_text.empty() && (den_text.front() == '-' || den_text.front() == '+')) {
    throw std::invalid_argument("denominator must be unsigned: '" + std::string(text) + "'");
  }
  const BigInt den = parse_bigint(den_text);
  if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

BigInt determinant(const IntMatrix& m) {
  const std::size_t n = m.size();
  for (const auto& row : m) {
    if (row.size() != n) throw std::invalid_argument("determinant: matrix is not square");
  }
  if (n == 0) return 1;
  IntMatrix a = m;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt v = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[i][j] = std::move(v);
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

LatticeBasis LatticeBasis::from_rows(IntMatrix rows) {
  const std::size_t n = rows.size();
  if (n < 2) throw std::invalid_argument("lattice basis needs dimension >= 2");
  for (const auto& row : rows) {
    if (row.size() != n) throw std::invalid_argument("lattice basis must be square");
  }
  BigInt det = abs(determinant(rows));
  if (det == 0) throw std::invalid_argument("lattice basis rows are linearly dependent");
  return LatticeBasis(std::move(rows), std::move(det));
}

LatticeBasis LatticeBasis::from_rows(IntMatrix rows, const BigInt& claimed_raw_det) {
  LatticeBasis b = from_rows(std::move(rows));
  if (b.raw_det() != claimed_raw_det) {
    throw std::invalid_argument("rawDet " + claimed_raw_det.get_str() + " does not match |det(rows)| = " +
                                b.raw_det().get_str());
  }
  return b;
}

bool same_lattice(const IntMatrix& a, const IntMatrix& b) {
  if (a.size() != b.size()) return false;
  return hermite_normal_form(a) == hermite_normal_form(b);
}

double log_ball_volume_coeff(int n) {
  if (n < 1) throw std::invalid_argument("ball_volume_coeff: n must be >= 1");
  const double half = 0.5 * n;
  return half * std::log(std::numbers::pi) - std::lgamma(half + 1.0);
}

double ball_volume_coeff(int n) { return std::exp(log_ball_volume_coeff(n)); }

double log_length_to_volume(int n, const BigInt& raw_norm_sq, const BigInt& raw_det) {
  if (raw_norm_sq < 0) throw std::invalid_argument("length_to_volume: negative squared length");
  if (raw_norm_sq == 0) return -std::numeric_limits<double>::infinity();
  return log_ball_volume_coeff(n) + 0.5 * n * log_abs(raw_norm_sq) - log_abs(raw_det);
}

double length_to_volume(int n, const BigInt& raw_norm_sq, const BigInt& raw_det) {
  if (raw_norm_sq == 0) return 0.0;
  return std::exp(log_length_to_volume(n, raw_norm_sq, raw_det));
}

bool volume_at_most(int n, const BigInt& raw_norm_sq, const BigInt& raw_det, double t) {
  if (raw_norm_sq == 0) return t >= 0.0;
  if (t <= 0.0) return false;
  if (std::isinf(t)) return true;
  HighPrecision lhs;
  HighPrecision rhs;
  high_precision_log_volume(lhs.get(), n, raw_norm_sq, raw_det);
  mpfr_set_d(rhs.get(), t, MPFR_RNDN);
  mpfr_log(rhs.get(), rhs.get(), MPFR_RNDN);
  return mpfr_lessequal_p(lhs.get(), rhs.get()) != 0;
}

double raw_norm_sq_bound(int n, double t, const BigInt& raw_det) {
  if (t <= 0.0) return 0.0;
  return std::exp((2.0 / n) * (std::log(t) + log_abs(raw_det) - log_ball_volume_coeff(n)));
}

double VolumeSequence::complete_up_to() const {
  if (!first_n_mode()) return cutoff;
  return entries.empty() ? 0.0 : entries.back().volume;
}

std::vector<double> VolumeSequence::volumes() const {
  std::vector<double> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.volume);
  return out;
}

std::uint64_t counting_function(const VolumeSequence& vols, double t) {
  if (t > vols.complete_up_to()) {
    throw std::domain_error("counting_function: t exceeds the enumerated census");
  }
  if (t < 0.0) return 0;
  // Volumes within this relative band of t are decided in high precision.
  constexpr double kBand = 1e-12;
  std::uint64_t count = 0;
  for (const auto& e : vols.entries) {
    if (e.volume < t * (1.0 - kBand)) {
      count += e.multiplicity;
    } else if (e.volume <= t * (1.0 + kBand)) {
      if (volume_at_most(vols.dim, e.raw_norm_sq, vols.raw_det, t)) count += e.multiplicity;
    } else {
      break;
    }
  }
  return count;
}

std::uint64_t counting_function(const VolumeSequence& vols, const BigInt& raw_norm_sq_key) {
  const double t = length_to_volume(vols.dim, raw_norm_sq_key, vols.raw_det);
  if (t > vols.complete_up_to()) {
    throw std::domain_error("counting_function: key exceeds the enumerated census");
  }
  std::uint64_t count = 0;
  for (const auto& e : vols.entries) {
    if (e.raw_norm_sq > raw_norm_sq_key) break;
    count += e.multiplicity;
  }
  return count;
}

CountRecord count_record(const VolumeSequence& vols, std::span<const double> thresholds) {
  CountRecord rec;
  rec.thresholds.assign(thresholds.begin(), thresholds.end());
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (i > 0 && !(thresholds[i] > thresholds[i - 1])) {
      throw std::invalid_argument("count_record: thresholds must be strictly increasing");
    }
    rec.counts.push_back(counting_function(vols, thresholds[i]));
  }
  return rec;
}

LatticeBasis dual_basis(const LatticeBasis& b) {
  const int n = b.dim();
  // Gauss-Jordan over the rationals: inv = rows^{-1}.
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = b.rows()[i][j];
    a[i][n + i] = 1;
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    while (a[piv][col] == 0) ++piv;
    std::swap(a[piv], a[col]);
    const Rational inv_p = 1 / a[col][col];
    for (auto& v : a[col]) v *= inv_p;
    for (int i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      const Rational f = a[i][col];
      for (int j = col; j < 2 * n; ++j) a[i][j] -= f * a[col][j];
    }
  }
  // dual rows = rawDet * (rows^{-1})^T; exact integers since rawDet * inverse = +-adjugate.
  IntMatrix dual(n, std::vector<BigInt>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Rational v = Rational(b.raw_det()) * a[j][n + i];
      if (v.get_den() != 1) throw std::logic_error("dual_basis: non-integral cofactor");
      dual[i][j] = v.get_num();
    }
  }
  BigInt expected = 1;
  mpz_pow_ui(expected.get_mpz_t(), b.raw_det().get_mpz_t(), static_cast<unsigned long>(n - 1));
  return LatticeBasis::from_rows(std::move(dual), expected);
}

}  // namespace latpois
