#include "latpois/verify.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "latpois/sampler.hpp"

namespace latpois {

namespace {

std::string describe(const Division& d) {
  std::ostringstream os;
  os << "k=" << d.k << " nu=(";
  for (std::size_t i = 0; i < d.nu.size(); ++i) os << (i ? "," : "") << d.nu[i];
  os << ") mu=(";
  for (std::size_t i = 0; i < d.mu.size(); ++i) os << (i ? "," : "") << d.mu[i];
  os << ")";
  return os.str();
}

std::string describe(const std::vector<Rational>& v) {
  std::ostringstream os;
  os << "V=(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
  os << ")";
  return os.str();
}

void fail(IdentityCheck& c, std::string what) {
  if (c.ok) c.counterexample = std::move(what);
  c.ok = false;
}

}  // namespace

IdentityCheck check_admissible_counts(int k, bool corrupt_closed_form) {
  IdentityCheck c{"admissible counts", k, true, 0, {}};
  for (const auto& d : enumerate_divisions(k)) {
    ++c.cases;
    std::uint64_t enumerated = 0;
    for_each_admissible(d, [&](const AdmissibleMatrix& a) {
      if (!is_admissible(a)) fail(c, "inadmissible matrix enumerated for " + describe(d));
      ++enumerated;
    });
    const BigInt product = count_admissible(d);
    if (product != BigInt(static_cast<unsigned long>(enumerated))) {
      fail(c, describe(d) + ": enumeration " + std::to_string(enumerated) + " != product " + product.get_str());
    }
    if (d.nu.front() == 1) {
      BigInt closed = closed_form_M(d);
      if (corrupt_closed_form) closed += 1;
      if (closed != product) {
        fail(c, describe(d) + ": closed form " + closed.get_str() + " != count " + product.get_str());
      }
    } else if (enumerated != 0) {
      fail(c, describe(d) + ": nu_1 != 1 but class is nonempty");
    }
  }
  return c;
}

IdentityCheck check_bijection(int k) {
  IdentityCheck c{"bijection", k, true, 0, {}};
  const auto cls = enumerate_nonnegative_class(k);
  std::set<std::vector<std::vector<int>>> images;
  for (const auto& d : cls) {
    ++c.cases;
    const SetPartition p = bijection_g(d);
    if (static_cast<int>(p.blocks.size()) != d.division.m()) fail(c, "#P != m for " + describe(d.division));
    for (std::size_t i = 0; i < p.blocks.size(); ++i) {
      if (p.blocks[i].front() != d.division.nu[i]) fail(c, "block minima != nu for " + describe(d.division));
    }
    if (!(bijection_g_inverse(p) == d)) fail(c, "g^-1(g(D)) != D for " + describe(d.division));
    images.insert(p.blocks);
  }
  const BigInt bell = bell_number(k);
  if (BigInt(static_cast<unsigned long>(cls.size())) != bell) {
    fail(c, "|D(k)| = " + std::to_string(cls.size()) + " != Bell(k) = " + bell.get_str());
  }
  if (images.size() != cls.size()) fail(c, "g is not injective");
  for_each_partition(k, [&](const SetPartition& p) {
    if (!images.contains(p.blocks)) fail(c, "g misses a partition");
    if (!(bijection_g(bijection_g_inverse(p)) == p)) fail(c, "g(g^-1(P)) != P");
  });
  return c;
}

std::vector<Rational> random_sorted_volumes(int k, std::uint64_t seed, std::uint64_t index) {
  TrialRng rng(seed, index);
  std::vector<Rational> v;
  for (int j = 0; j < k; ++j) {
    Rational r(static_cast<unsigned long>(1 + rng.below(1000)), static_cast<unsigned long>(1 + rng.below(100)));
    r.canonicalize();
    v.push_back(r);
  }
  std::sort(v.begin(), v.end());
  return v;
}

IdentityCheck check_moment_identity(int k, int samples, std::uint64_t seed) {
  IdentityCheck c{"moment identity", k, true, 0, {}};
  for (int s = 0; s < samples; ++s) {
    ++c.cases;
    const auto vols = random_sorted_volumes(k, seed + static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(s));
    const MomentSpec spec = MomentSpec::make(vols);
    const Rational pair = pair_moment(spec);
    const Rational partition = limit_moment_partition_form(spec);
    if (pair != partition) {
      fail(c, describe(vols) + ": 2^-k matrix " + pair.get_str() + " != partition " + partition.get_str());
    }
  }
  return c;
}

IdentityCheck check_touchard(int k, const Rational& volume) {
  IdentityCheck c{"touchard", k, true, 1, {}};
  const MomentSpec spec = MomentSpec::make(std::vector<Rational>(k, volume));
  const Rational partition = limit_moment_partition_form(spec);
  const Rational touchard = touchard_poisson_moment(k, volume / 2);
  if (partition != touchard) {
    fail(c, "V=" + volume.get_str() + ": partition " + partition.get_str() + " != Touchard " + touchard.get_str());
  }
  return c;
}

bool VerifyReport::ok() const { return first_failure() == nullptr; }

const IdentityCheck* VerifyReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.ok) return &c;
  }
  return nullptr;
}

VerifyReport verify_identities(int k_max, const VerifyOptions& opts) {
  if (k_max < 1 || k_max > kDefaultKMax) {
    throw std::invalid_argument("verify: k_max must lie in [1, " + std::to_string(kDefaultKMax) + "]");
  }
  VerifyReport report;
  const std::vector<Rational> touchard_volumes{Rational(1), Rational(2), Rational(7, 3)};
  for (int k = 1; k <= k_max; ++k) {
    VerifySummary s;
    s.k = k;
    for (const auto& d : enumerate_divisions(k)) {
      ++s.divisions;
      s.matrices += count_admissible(d).get_ui();
    }
    s.bell = bell_number(k).get_str();
    report.checks.push_back(check_admissible_counts(k, opts.corrupt_closed_form));
    IdentityCheck bij = check_bijection(k);
    s.nonnegative_class = bij.cases;
    report.checks.push_back(std::move(bij));
    report.checks.push_back(check_moment_identity(k, k <= 7 ? opts.samples_small : opts.samples_large, opts.seed));
    for (const auto& v : touchard_volumes) report.checks.push_back(check_touchard(k, v));
    report.per_k.push_back(s);
  }
  return report;
}

}  // namespace latpois
