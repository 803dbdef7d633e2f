#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "latpois/lattice.hpp"

namespace latpois {

struct ReducedBasis {
  IntMatrix rows;
  IntMatrix transform;  // transform * original_rows == rows, |det transform| == 1
  double delta = 0.99;
};

struct LllOptions {
  double delta = 0.99;
  // Finish with an exact integral LLL pass, which certifies (and if needed
  // repairs) the floating-point result. Enumeration does not need it.
  bool certify = true;
};

/// LLL reduction: floating-point Schnorr-Euchner with an exact integral LLL
/// fallback. Requires 1/4 < delta < 1.
ReducedBasis lll_reduce(const LatticeBasis& b, const LllOptions& opts = {});

/// Exact check of size reduction (|mu_ij| <= 1/2) and the Lovasz condition.
bool is_lll_reduced(const IntMatrix& rows, double delta);

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnumerationOptions {
  double guard = 1e-9;
  std::uint64_t node_budget = 1'000'000'000;
  double delta = 0.99;
};

/// Acceptance bound for a volume t: a vector is kept iff its integer squared
/// length is at most raw_norm_sq_bound, with the guard band resolved in
/// high precision.
struct EnumerationBound {
  double volume_t = 0.0;
  double raw_norm_sq_bound = 0.0;
  double guard = 1e-9;

  static EnumerationBound make(int n, double t, const BigInt& raw_det, double guard);
  bool accepts(int n, const BigInt& raw_norm_sq, const BigInt& raw_det) const;
};

/*
 * Complete enumeration of short vectors of one lattice. The basis is LLL
 * reduced once at construction; each query then runs a depth-first
 * Schnorr-Euchner traversal over the reduced Gram-Schmidt data.
 */
class Enumerator {
 public:
  explicit Enumerator(const LatticeBasis& b, const EnumerationOptions& opts = {});

  /// All antipodal pairs with volume <= t, one canonical representative each.
  VolumeSequence up_to_volume(double t) const;
  /// The count smallest pairs; grows the volume bound from 2 * count by doubling.
  VolumeSequence first(std::size_t count) const;

  /// Gaussian-heuristic estimate of the traversal size for a raw squared radius.
  double predicted_nodes(double raw_norm_sq_radius) const;
  /// Nodes visited by the most recent query.
  std::uint64_t last_node_count() const { return last_nodes_; }

  const IntMatrix& reduced_rows() const { return reduced_; }

 private:
  int n_;
  BigInt raw_det_;
  EnumerationOptions opts_;
  IntMatrix reduced_;
  std::vector<double> mu_;     // row-major n x n, mu_[i * n + j] for j < i
  std::vector<double> bstar_;  // squared Gram-Schmidt norms
  mutable std::uint64_t last_nodes_ = 0;
};

VolumeSequence enumerate_up_to_volume(const LatticeBasis& b, double t, const EnumerationOptions& opts = {});
VolumeSequence first_volumes(const LatticeBasis& b, std::size_t count, const EnumerationOptions& opts = {});

}  // namespace latpois
