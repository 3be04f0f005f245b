#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "coverify/locallemma.hpp"
#include "coverify/oracle.hpp"
#include "coverify/shearer.hpp"

namespace harness {

using coverify::oracle::CongruenceSystem;

/// Canonical rational a/b.
inline mpq_class frac(std::uint64_t a, std::uint64_t b) {
  mpq_class q(mpz_class(std::to_string(a), 10), mpz_class(std::to_string(b), 10));
  q.canonicalize();
  return q;
}

/// Random system whose moduli are squarefree products of primes in `pool`,
/// with lcm at most `q_max`. Moduli are distinct; each class has one residue.
inline CongruenceSystem random_system(std::mt19937_64& rng, const std::vector<std::uint64_t>& pool,
                                      std::uint64_t q_max, int max_entries, int max_factors) {
  CongruenceSystem sys;
  std::uniform_int_distribution<int> count_d(1, max_entries);
  std::uniform_int_distribution<int> factors_d(1, max_factors);
  int want = count_d(rng);
  std::uint64_t q = 1;
  std::vector<std::uint64_t> used;
  for (int attempt = 0; attempt < 50 && static_cast<int>(sys.entries.size()) < want; ++attempt) {
    std::vector<std::uint64_t> ps = pool;
    std::shuffle(ps.begin(), ps.end(), rng);
    int f = factors_d(rng);
    std::uint64_t m = 1;
    for (int k = 0; k < f && k < static_cast<int>(ps.size()); ++k) m *= ps[k];
    if (std::find(used.begin(), used.end(), m) != used.end()) continue;
    std::uint64_t q2 = coverify::oracle::lcm64(q, m);
    if (q2 > q_max) continue;
    q = q2;
    used.push_back(m);
    std::uniform_int_distribution<std::uint64_t> res(0, m - 1);
    sys.entries.push_back({m, {res(rng)}});
  }
  return sys;
}

struct SoundnessStats {
  int systems = 0;
  int certified = 0;
  int density_checks = 0;
  int bias_checks = 0;
  int density_violations = 0;
  int bias_violations = 0;
};

/// Random systems with moduli coprime to 6 and lcm at most 10^6. For every
/// system whose weights certify, the exact density must be at least the
/// density lower bound, and the exact maximal bias modulo each modulus and
/// each prime must be at most the bias upper bound.
inline SoundnessStats soundness_run(int count, std::uint64_t seed) {
  using namespace coverify;
  const std::vector<std::uint64_t> pool{5, 7, 11, 13, 17, 19, 23, 29, 31};
  std::mt19937_64 rng(seed);
  SoundnessStats st;
  lll::NewtonOptions nopts;
  for (int s = 0; s < count; ++s) {
    CongruenceSystem sys = random_system(rng, pool, 1'000'000, 8, 3);
    ++st.systems;
    auto inst = lll::SieveInstance::from_system(sys);
    lll::FixedPointCertificate cert;
    try {
      cert = lll::newton_fixed_point(inst, Interval(3.0), nopts);
    } catch (const Error&) {
      continue;
    }
    if (!cert.has_fixed_point) continue;
    lll::Weights x(cert.x_verified.begin(), cert.x_verified.end());
    if (!lll::check_weights(inst, x)) continue;
    ++st.certified;
    mpq_class density = oracle::uncovered_density(sys);
    Interval lower = lll::density_lower_bound(inst, x);
    ++st.density_checks;
    if (!(mpq_class(lower.hi()) <= density)) ++st.density_violations;
    std::vector<std::uint64_t> ns;
    for (const auto& e : sys.entries) ns.push_back(e.modulus);
    for (std::uint64_t p : inst.primes()) ns.push_back(p);
    for (std::uint64_t n : ns) {
      mpq_class bias = oracle::max_bias(sys, n);
      Interval upper = lll::bias_upper_bound(inst, x, n) * Interval(static_cast<double>(n));
      ++st.bias_checks;
      if (!(bias <= mpq_class(upper.lo()))) ++st.bias_violations;
    }
  }
  return st;
}

struct ShearerStats {
  int systems = 0;
  int comparisons = 0;
  int density_violations = 0;
  int bias_violations = 0;
};

/// Random distinct systems on the primes {5, 7, 11}, one residue per modulus
/// m > 1 dividing 385 chosen independently with probability 1/2. The exact
/// density must be positive and, for every m | 385, the exact maximal bias
/// divided by m must not exceed the progression bound.
inline ShearerStats shearer_run(int count, std::uint64_t seed) {
  using namespace coverify;
  const std::vector<std::uint64_t> primes{5, 7, 11};
  const std::vector<std::uint64_t> divisors{5, 7, 11, 35, 55, 77, 385};
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  ShearerStats st;
  std::vector<Interval> bounds;
  for (std::uint64_t m : divisors) bounds.push_back(shearer::progression_bound(m, primes));
  for (int s = 0; s < count; ++s) {
    CongruenceSystem sys;
    for (std::uint64_t m : divisors) {
      if (!coin(rng)) continue;
      std::uniform_int_distribution<std::uint64_t> res(0, m - 1);
      sys.entries.push_back({m, {res(rng)}});
    }
    ++st.systems;
    mpq_class density = oracle::uncovered_density(sys);
    if (density <= 0) {
      ++st.density_violations;
      continue;
    }
    for (std::size_t k = 0; k < divisors.size(); ++k) {
      std::uint64_t m = divisors[k];
      mpq_class bias_over_m = oracle::max_bias(sys, m) / frac(m, 1);
      ++st.comparisons;
      if (!(bias_over_m <= mpq_class(bounds[k].hi()))) ++st.bias_violations;
    }
  }
  return st;
}

}  // namespace harness
