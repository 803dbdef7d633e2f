#include <algorithm>
#include <cmath>
#include <numbers>

#include "latpois/shortvec.hpp"

namespace latpois {

namespace {

bool lex_less(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](const BigInt& x, const BigInt& y) { return cmp(x, y) < 0; });
}

void canonicalize(std::vector<BigInt>& v) {
  for (const auto& c : v) {
    if (c == 0) continue;
    if (c < 0) {
      for (auto& e : v) e = -e;
    }
    return;
  }
}

}  // namespace

EnumerationBound EnumerationBound::make(int n, double t, const BigInt& raw_det, double guard) {
  if (!(t > 0.0)) throw std::invalid_argument("enumeration volume bound must be positive");
  return EnumerationBound{t, latpois::raw_norm_sq_bound(n, t, raw_det), guard};
}

bool EnumerationBound::accepts(int n, const BigInt& raw_norm_sq, const BigInt& raw_det) const {
  const double v = raw_norm_sq.get_d();
  if (v < raw_norm_sq_bound * (1.0 - guard)) return true;
  if (v > raw_norm_sq_bound * (1.0 + guard)) return false;
  return volume_at_most(n, raw_norm_sq, raw_det, volume_t);
}

Enumerator::Enumerator(const LatticeBasis& b, const EnumerationOptions& opts)
    : n_(b.dim()), raw_det_(b.raw_det()), opts_(opts) {
  reduced_ = lll_reduce(b, LllOptions{opts.delta, /*certify=*/false}).rows;

  // Gram-Schmidt from the exact Gram matrix.
  std::vector<long double> gram(static_cast<std::size_t>(n_) * n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j <= i; ++j) {
      BigInt s = 0;
      for (int c = 0; c < n_; ++c) s += reduced_[i][c] * reduced_[j][c];
      gram[i * n_ + j] = gram[j * n_ + i] = static_cast<long double>(s.get_d());
    }
  }
  std::vector<long double> r(static_cast<std::size_t>(n_) * n_, 0.0L);
  std::vector<long double> bstar(n_);
  mu_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < i; ++j) {
      long double v = gram[i * n_ + j];
      for (int k = 0; k < j; ++k) v -= mu_[j * n_ + k] * r[i * n_ + k];
      r[i * n_ + j] = v;
      mu_[i * n_ + j] = static_cast<double>(v / bstar[j]);
    }
    long double s = gram[i * n_ + i];
    for (int j = 0; j < i; ++j) s -= static_cast<long double>(mu_[i * n_ + j]) * r[i * n_ + j];
    bstar[i] = s;
  }
  bstar_.assign(bstar.begin(), bstar.end());
}

double Enumerator::predicted_nodes(double raw_norm_sq_radius) const {
  if (raw_norm_sq_radius <= 0.0) return 1.0;
  const double log_r = 0.5 * std::log(raw_norm_sq_radius);
  double total = 0.0;
  double log_det_tail = 0.0;
  for (int j = 1; j <= n_; ++j) {
    log_det_tail += 0.5 * std::log(bstar_[n_ - j]);
    // Half of the projected lattice points in a ball of radius R at depth j.
    total += 0.5 * std::exp(log_ball_volume_coeff(j) + j * log_r - log_det_tail);
  }
  return total;
}

VolumeSequence Enumerator::up_to_volume(double t) const {
  const EnumerationBound bound = EnumerationBound::make(n_, t, raw_det_, opts_.guard);
  const double radius_sq = bound.raw_norm_sq_bound * (1.0 + opts_.guard);
  if (predicted_nodes(radius_sq) > static_cast<double>(opts_.node_budget)) {
    throw BudgetExceeded("enumeration: predicted node count exceeds the budget");
  }

  VolumeSequence out;
  out.dim = n_;
  out.raw_det = raw_det_;
  out.cutoff = t;

  const int n = n_;
  const int stride = n + 1;
  std::vector<double> x(n, 0.0), c(n, 0.0), dx(n, 1.0), ddx(n, 1.0), l(n + 1, 0.0);
  std::vector<double> sig(static_cast<std::size_t>(n) * stride, 0.0);  // sig[k*stride+j] = sum_{i>=j} x_i mu_ik
  std::vector<int> stale(n, n - 1);
  std::uint64_t nodes = 0;
  const std::uint64_t budget = opts_.node_budget;

  auto record = [&]() {
    VolumeEntry e;
    e.representative.assign(n, 0);
    for (int i = 0; i < n; ++i) {
      if (x[i] == 0.0) continue;
      const BigInt coeff(x[i]);
      for (int j = 0; j < n; ++j) e.representative[j] += coeff * reduced_[i][j];
    }
    for (const auto& v : e.representative) e.raw_norm_sq += v * v;
    if (!bound.accepts(n, e.raw_norm_sq, raw_det_)) return;
    canonicalize(e.representative);
    e.volume = length_to_volume(n, e.raw_norm_sq, raw_det_);
    out.entries.push_back(std::move(e));
  };

  // Next sibling at level k: zig-zag around the center, or positive steps
  // only when every higher coordinate is zero (one vector per +-pair).
  auto advance = [&](int k) {
    if (l[k + 1] == 0.0) {
      x[k] += 1.0;
    } else {
      x[k] += dx[k];
      ddx[k] = -ddx[k];
      dx[k] = ddx[k] - dx[k];
    }
    if (k > 0) stale[k - 1] = std::max(stale[k - 1], k);
  };

  int k = n - 1;
  for (;;) {
    const double diff = x[k] - c[k];
    const double lk = l[k + 1] + diff * diff * bstar_[k];
    if (++nodes > budget) {
      last_nodes_ = nodes;
      throw BudgetExceeded("enumeration: node budget exhausted");
    }
    if (lk <= radius_sq) {
      l[k] = lk;
      if (k == 0) {
        if (lk > 0.0) record();
        advance(0);
        continue;
      }
      --k;
      const int top = stale[k];
      double* row = &sig[static_cast<std::size_t>(k) * stride];
      for (int j = top; j > k; --j) row[j] = row[j + 1] + x[j] * mu_[j * n + k];
      if (k > 0) stale[k - 1] = std::max(stale[k - 1], top);
      stale[k] = k;
      c[k] = -row[k + 1];
      x[k] = std::nearbyint(c[k]);
      dx[k] = ddx[k] = (c[k] < x[k]) ? -1.0 : 1.0;
      if (k > 0) stale[k - 1] = std::max(stale[k - 1], k);
    } else {
      ++k;
      if (k == n) break;
      advance(k);
    }
  }
  last_nodes_ = nodes;

  std::sort(out.entries.begin(), out.entries.end(), [](const VolumeEntry& a, const VolumeEntry& b) {
    const int c = cmp(a.raw_norm_sq, b.raw_norm_sq);
    if (c != 0) return c < 0;
    return lex_less(a.representative, b.representative);
  });
  return out;
}

VolumeSequence Enumerator::first(std::size_t count) const {
  if (count == 0) throw std::invalid_argument("first_volumes: N must be positive");
  double t = 2.0 * static_cast<double>(count);
  for (;;) {
    VolumeSequence seq = up_to_volume(t);
    if (seq.entries.size() >= count) {
      seq.entries.resize(count);
      seq.cutoff = std::numeric_limits<double>::infinity();
      return seq;
    }
    t *= 2.0;
  }
}

VolumeSequence enumerate_up_to_volume(const LatticeBasis& b, double t, const EnumerationOptions& opts) {
  return Enumerator(b, opts).up_to_volume(t);
}

VolumeSequence first_volumes(const LatticeBasis& b, std::size_t count, const EnumerationOptions& opts) {
  return Enumerator(b, opts).first(count);
}

std::vector<double> torus_eigenvalue_volumes(const LatticeBasis& b, std::size_t count) {
  const VolumeSequence seq = first_volumes(dual_basis(b), count);
  std::vector<double> out;
  out.reserve(seq.entries.size());
  for (const auto& e : seq.entries) out.push_back(0.5 * e.volume);
  return out;
}

}  // namespace latpois
