#include "latpois/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace latpois {

MomentEstimate estimate_mean(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("estimate needs at least two samples");
  long double sum = 0.0L;
  for (double v : values) sum += v;
  const long double n = static_cast<long double>(values.size());
  const long double mean = sum / n;
  long double ss = 0.0L;
  for (double v : values) ss += (v - mean) * (v - mean);
  const long double var = ss / (n - 1.0L);
  return MomentEstimate{static_cast<double>(mean), static_cast<double>(std::sqrt(var / n)), values.size()};
}

MomentEstimate empirical_joint_moment(std::span<const CountVector> samples, const MomentSpec& s) {
  std::vector<double> products;
  products.reserve(samples.size());
  for (const auto& c : samples) {
    if (static_cast<int>(c.size()) != s.k()) {
      throw std::invalid_argument("empirical_joint_moment: count vector length differs from k");
    }
    double p = 1.0;
    for (auto v : c) p *= static_cast<double>(v);
    products.push_back(p);
  }
  return estimate_mean(products);
}

double ks_statistic_exp2(std::span<const double> sample) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic_exp2: empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = x[i] <= 0.0 ? 0.0 : -std::expm1(-0.5 * x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double kolmogorov_pvalue(double x) {
  if (x <= 0.0) return 1.0;
  // Q(x) = 2 sum_{j>=1} (-1)^(j-1) exp(-2 j^2 x^2)
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

void CorrelationQuery::validate() const {
  if (m < 2) throw std::invalid_argument("correlation order m must be >= 2");
  if (static_cast<int>(intervals.size()) != m - 1) {
    throw std::invalid_argument("correlation query needs m - 1 intervals");
  }
  for (const auto& iv : intervals) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.hi > iv.lo)) {
      throw std::invalid_argument("correlation intervals must have finite positive length");
    }
  }
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw std::invalid_argument("correlation cutoff N must be positive");
}

double CorrelationQuery::required_census() const {
  double reach = 0.0;
  for (const auto& iv : intervals) reach = std::max({reach, std::fabs(iv.lo), std::fabs(iv.hi)});
  return cutoff + reach;
}

double level_correlation(std::span<const double> v, double complete_up_to, const CorrelationQuery& q) {
  q.validate();
  if (complete_up_to < q.required_census()) {
    throw std::domain_error("level_correlation: census incomplete for this query");
  }
  if (!std::is_sorted(v.begin(), v.end())) throw std::invalid_argument("level_correlation: values must be sorted");
  const auto end = std::lower_bound(v.begin(), v.end(), q.cutoff);  // only V < N
  const std::span<const double> pts(v.begin(), end);

  // Points of pts within [a, b], and whether index i itself lies there.
  auto count_in = [&](double a, double b) -> long long {
    if (a > b) return 0;
    return std::upper_bound(pts.begin(), pts.end(), b) - std::lower_bound(pts.begin(), pts.end(), a);
  };

  // Inclusion-exclusion over set partitions of the m-1 free slots: the
  // injective count equals sum_P mu(P) prod_B |intersection of slot sets in B|,
  // with Moebius weight mu(P) = prod_B (-1)^(|B|-1) (|B|-1)!.
  const int slots = q.m - 1;
  struct Term {
    long double weight;
    std::vector<std::vector<int>> blocks;
  };
  std::vector<Term> terms;
  for_each_partition(slots, [&](const SetPartition& p) {
    long double w = 1.0L;
    for (const auto& b : p.blocks) {
      const int s = static_cast<int>(b.size());
      long double f = 1.0L;
      for (int r = 2; r < s; ++r) f *= r;
      w *= (s % 2 == 1 ? f : -f);
    }
    terms.push_back({w, p.blocks});
  });

  long double total = 0.0L;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = pts[i];
    long double tuples = 0.0L;
    for (const auto& term : terms) {
      long double prod = term.weight;
      for (const auto& block : term.blocks) {
        // V_{i_1} - V_{i_j} in [lo, hi]  <=>  V_{i_j} in [x - hi, x - lo]
        double a = -std::numeric_limits<double>::infinity();
        double b = std::numeric_limits<double>::infinity();
        for (int slot : block) {
          a = std::max(a, x - q.intervals[slot - 1].hi);
          b = std::min(b, x - q.intervals[slot - 1].lo);
        }
        long long c = count_in(a, b);
        if (a <= x && x <= b) --c;  // i_j != i_1
        prod *= static_cast<long double>(c);
        if (prod == 0.0L) break;
      }
      tuples += prod;
    }
    total += tuples;
  }
  return static_cast<double>(total / q.cutoff);
}

double level_correlation(const VolumeSequence& vols, const CorrelationQuery& q) {
  const std::vector<double> v = vols.volumes();
  return level_correlation(v, vols.complete_up_to(), q);
}

double poissonian_correlation(const CorrelationQuery& q) {
  double p = std::ldexp(1.0, 1 - q.m);
  for (const auto& iv : q.intervals) p *= iv.length();
  return p;
}

double z_score(double diff, double se) {
  if (se == 0.0) return diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  return diff / se;
}

ComparisonReport compare_report(const CountRun& lattice, const CountRun& poisson, const MomentSpec& s) {
  if (lattice.thresholds != poisson.thresholds) {
    throw std::invalid_argument("compare_report: runs use different thresholds");
  }
  if (static_cast<int>(lattice.thresholds.size()) != s.k()) {
    throw std::invalid_argument("compare_report: spec length differs from the run thresholds");
  }
  for (int j = 0; j < s.k(); ++j) {
    if (std::fabs(s.volumes[j].get_d() - lattice.thresholds[j]) > 1e-12 * lattice.thresholds[j]) {
      throw std::invalid_argument("compare_report: spec volumes differ from the run thresholds");
    }
  }
  ComparisonReport report{s, {}};

  auto make_row = [&](std::string name, std::vector<int> idx) {
    std::vector<Rational> vols;
    for (int j : idx) vols.push_back(s.volumes[j]);
    const MomentSpec sub = MomentSpec::make(vols);
    auto project = [&](const CountRun& run) {
      std::vector<CountVector> picked;
      picked.reserve(run.samples.size());
      for (const auto& c : run.samples) {
        CountVector v;
        for (int j : idx) v.push_back(c.at(j));
        picked.push_back(std::move(v));
      }
      return empirical_joint_moment(picked, sub);
    };
    ReportRow row;
    row.name = std::move(name);
    row.exact = pair_moment(sub);
    row.lattice = project(lattice);
    row.poisson = project(poisson);
    row.indices = std::move(idx);
    const double exact = row.exact.get_d();
    row.z_lattice = z_score(row.lattice.value - exact, row.lattice.std_error);
    row.z_poisson = z_score(row.poisson.value - exact, row.poisson.std_error);
    row.z_pairwise = z_score(row.lattice.value - row.poisson.value,
                             std::hypot(row.lattice.std_error, row.poisson.std_error));
    report.rows.push_back(std::move(row));
  };

  for (int j = 0; j < s.k(); ++j) make_row("N(" + std::to_string(lattice.thresholds[j]) + ")", {j});
  if (s.k() > 1) {
    std::vector<int> all(s.k());
    for (int j = 0; j < s.k(); ++j) all[j] = j;
    make_row("prod", all);
  }
  return report;
}

}  // namespace latpois
