#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace latpois {

using BigInt = mpz_class;
using Rational = mpq_class;
using IntMatrix = std::vector<std::vector<BigInt>>;

/// Parses a decimal integer string (optional leading sign). Throws std::invalid_argument.
BigInt parse_bigint(std::string_view text);

/// Parses "p/q" or an integer string. Decimal fractions are rejected so exact
/// inputs stay exact.
Rational parse_rational(std::string_view text);

/// Exact determinant by fraction-free (Bareiss) elimination.
BigInt determinant(const IntMatrix& m);

/// Row-style Hermite normal form of a full-rank square integer matrix:
/// upper triangular, positive diagonal, entries above each pivot in [0, pivot).
/// Two bases span the same lattice iff their HNFs are equal.
IntMatrix hermite_normal_form(IntMatrix rows);

/*
 * An integral basis of an n-dimensional lattice together with |det(rows)|.
 *
 * The lattice it represents has covolume 1: L = rawDet^(-1/n) * span_Z(rows).
 * The irrational scale is never materialised; squared lengths are handled as
 * exact integers ("raw" norms) and converted to ball volumes in log space.
 */
class LatticeBasis {
 public:
  /// Validates shape (square, n >= 2) and independence; computes rawDet exactly.
  static LatticeBasis from_rows(IntMatrix rows);

  /// As from_rows, but additionally requires the supplied rawDet to match.
  static LatticeBasis from_rows(IntMatrix rows, const BigInt& claimed_raw_det);

  int dim() const { return static_cast<int>(rows_.size()); }
  const IntMatrix& rows() const { return rows_; }
  const BigInt& raw_det() const { return raw_det_; }

  friend bool operator==(const LatticeBasis&, const LatticeBasis&) = default;

 private:
  LatticeBasis(IntMatrix rows, BigInt raw_det)
      : rows_(std::move(rows)), raw_det_(std::move(raw_det)) {}

  IntMatrix rows_;
  BigInt raw_det_;
};

/// True iff both bases span the same set of integer vectors.
bool same_lattice(const IntMatrix& a, const IntMatrix& b);

/// kappa_n = pi^(n/2) / Gamma(n/2 + 1), the volume of the unit n-ball.
double ball_volume_coeff(int n);
double log_ball_volume_coeff(int n);

/// Ball volume for a vector of integer squared length rawNormSq in the
/// covolume-1 normalisation of a lattice with the given rawDet:
/// kappa_n * rawNormSq^(n/2) / rawDet.
double length_to_volume(int n, const BigInt& raw_norm_sq, const BigInt& raw_det);
double log_length_to_volume(int n, const BigInt& raw_norm_sq, const BigInt& raw_det);

/// Decides length_to_volume(n, rawNormSq, rawDet) <= t with 256-bit MPFR arithmetic.
bool volume_at_most(int n, const BigInt& raw_norm_sq, const BigInt& raw_det, double t);

/// The squared raw length whose ball volume is t: (t * rawDet / kappa_n)^(2/n).
double raw_norm_sq_bound(int n, double t, const BigInt& raw_det);

struct VolumeEntry {
  double volume = 0.0;
  BigInt raw_norm_sq;
  std::uint64_t multiplicity = 1;
  // Canonical representative of the antipodal pair in ambient integer
  // coordinates: first nonzero coordinate positive.
  std::vector<BigInt> representative;
};

/*
 * Sorted census of antipodal pairs {+x, -x}: one entry per pair, ordered by
 * exact rawNormSq and then lexicographically by representative.
 *
 * cutoff is the volume up to which the census is complete. A first-N census
 * carries +infinity as a sentinel; it is then complete only up to the volume
 * of its last entry.
 */
struct VolumeSequence {
  int dim = 0;
  BigInt raw_det = 1;
  std::vector<VolumeEntry> entries;
  double cutoff = std::numeric_limits<double>::infinity();

  bool first_n_mode() const { return cutoff == std::numeric_limits<double>::infinity(); }
  /// The largest t for which counting_function is defined.
  double complete_up_to() const;
  std::vector<double> volumes() const;
};

/// Number of pairs (with multiplicity) of volume <= t. Throws
/// std::domain_error when t exceeds the census.
std::uint64_t counting_function(const VolumeSequence& vols, double t);

/// Exact variant: counts entries with rawNormSq <= key.
std::uint64_t counting_function(const VolumeSequence& vols, const BigInt& raw_norm_sq_key);

struct CountRecord {
  std::vector<double> thresholds;
  std::vector<std::uint64_t> counts;
};

/// Counts at each threshold; thresholds must be strictly increasing.
CountRecord count_record(const VolumeSequence& vols, std::span<const double> thresholds);

/// Integral basis of the dual lattice: the cofactor matrix of rows (sign
/// adjusted so rows * dual^T = rawDet * I). rawDet' = rawDet^(n-1).
LatticeBasis dual_basis(const LatticeBasis& b);

/// First N values of {V_j / 2} for the dual lattice: the flat-torus Laplace
/// eigenvalues of R^n / L, desymmetrised and normalised to mean spacing one.
std::vector<double> torus_eigenvalue_volumes(const LatticeBasis& b, std::size_t count);

}  // namespace latpois
