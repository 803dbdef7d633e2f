#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latpois/moments.hpp"

namespace latpois {

struct IdentityCheck {
  std::string name;
  int k = 0;
  bool ok = true;
  std::uint64_t cases = 0;
  std::string counterexample;  // first failure, empty when ok
};

/// Enumeration count == product oracle for every division of {1..k}, and both
/// equal the closed form when nu_1 = 1. `corrupt_closed_form` adds one to the
/// closed form (negative control).
IdentityCheck check_admissible_counts(int k, bool corrupt_closed_form = false);

/// g is a bijection from the nonnegative class (with I_k) onto the partitions
/// of {1..k}, with #P = m and block minima = nu; the class has Bell(k) members.
IdentityCheck check_bijection(int k);

/// 2^-k * matrix form == partition form exactly on `samples` seeded random
/// sorted rational volume vectors.
IdentityCheck check_moment_identity(int k, int samples, std::uint64_t seed);

/// Equal volumes V: partition form == touchard_poisson_moment(k, V/2).
IdentityCheck check_touchard(int k, const Rational& volume);

/// Random sorted positive rationals with numerators in [1, 1000] and
/// denominators in [1, 100].
std::vector<Rational> random_sorted_volumes(int k, std::uint64_t seed, std::uint64_t index);

struct VerifyOptions {
  int samples_small = 100;  // random specs per k for k <= 7
  int samples_large = 3;    // for k > 7
  std::uint64_t seed = 0;
  bool corrupt_closed_form = false;
};

struct VerifySummary {
  int k = 0;
  std::uint64_t divisions = 0;
  std::uint64_t matrices = 0;         // main-term class, all signs
  std::uint64_t nonnegative_class = 0;
  std::string bell;
};

struct VerifyReport {
  std::vector<VerifySummary> per_k;
  std::vector<IdentityCheck> checks;
  bool ok() const;
  const IdentityCheck* first_failure() const;
};

VerifyReport verify_identities(int k_max, const VerifyOptions& opts = {});

}  // namespace latpois
