#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "latpois/lattice.hpp"
#include "latpois/moments.hpp"

namespace latpois {

struct MomentEstimate {
  double value = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(trials)
  std::uint64_t trials = 0;
};

using CountVector = std::vector<std::uint64_t>;

/// Sample mean and standard error of prod_j counts[j]. Needs >= 2 samples,
/// each of length s.k(). Summation is in sample order over long double, so
/// results depend only on the multiset up to rounding.
MomentEstimate empirical_joint_moment(std::span<const CountVector> samples, const MomentSpec& s);

/// Mean and standard error of arbitrary per-trial values.
MomentEstimate estimate_mean(std::span<const double> values);

/// sup_t |F_n(t) - (1 - exp(-t/2))| for the empirical CDF of the sample.
double ks_statistic_exp2(std::span<const double> sample);

/// Asymptotic Kolmogorov distribution P(sqrt(n) D_n > x), for reporting.
double kolmogorov_pvalue(double sqrt_n_times_d);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

struct CorrelationQuery {
  int m = 2;
  std::vector<Interval> intervals;  // m - 1 closed intervals
  double cutoff = 0.0;              // N

  void validate() const;
  /// The volume up to which the sequence must be complete.
  double required_census() const;
};

/*
 * #{(i_1..i_m) distinct : V_i < N, V_{i_1} - V_{i_j} in I_{j-1}} / N, where
 * each value of the sequence is one index. Exact count via inclusion-exclusion
 * over coincidences among i_2..i_m.
 */
double level_correlation(std::span<const double> sorted_values, double complete_up_to, const CorrelationQuery& q);
double level_correlation(const VolumeSequence& vols, const CorrelationQuery& q);

/// Poissonian value of the correlation as displayed in the theorem: 2^(1-m) prod |I_j|.
double poissonian_correlation(const CorrelationQuery& q);

// --- run comparison ---

/// Per-trial count vectors of one simulation, with the thresholds they refer to.
struct CountRun {
  std::string label;
  std::vector<double> thresholds;
  std::vector<CountVector> samples;
};

struct ReportRow {
  std::string name;          // "N(t)" or "prod"
  std::vector<int> indices;  // 0-based threshold indices in the product
  Rational exact;            // pair_moment of the selected volumes
  MomentEstimate lattice;
  MomentEstimate poisson;
  double z_lattice = 0.0;    // (lattice - exact) / se
  double z_poisson = 0.0;    // (poisson - exact) / se
  double z_pairwise = 0.0;   // (lattice - poisson) / sqrt(se_l^2 + se_p^2)
};

struct ComparisonReport {
  MomentSpec spec;
  std::vector<ReportRow> rows;
};

/// Rows for each single threshold and for the joint product over all of them.
/// Throws std::invalid_argument when the runs use different thresholds.
ComparisonReport compare_report(const CountRun& lattice, const CountRun& poisson, const MomentSpec& s);

/// z-score with the convention 0/0 = 0.
double z_score(double diff, double se);

}  // namespace latpois
