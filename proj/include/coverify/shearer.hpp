#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coverify/rigor.hpp"

namespace coverify::shearer {

struct ChainOptions {
  /// Resolve overlapping enclosures with exact rational arithmetic.
  bool exact_fallback = true;
};

/// Prefix chain rho(p_1) >= rho(p_1 p_2) >= ... > 0 with weights 1/(p-1), theta = 1.
struct ChainCertificate {
  std::vector<std::uint64_t> primes;
  std::vector<Interval> rho_chain;  // rho of each prefix that was evaluated
  std::vector<bool> exact_used;     // per prefix: exact arithmetic settled its checks
  bool holds = false;
  int fail_index = -1;  // index of the first prime whose prefix breaks the chain
  std::uint64_t fail_prime = 0;
  std::string reason;
};

ChainCertificate verify_chain(const std::vector<std::uint64_t>& primes, const ChainOptions& opts = {});

/// Primes p with 4 < p < limit.
std::vector<std::uint64_t> primes_between_4_and(std::uint64_t limit);

/// (1/m) rho([n] \ S_m) / rho([n]) with S_m the primes dividing m.
Interval progression_bound(std::uint64_t m, const std::vector<std::uint64_t>& primes);

struct BiasStat {
  int k = 0;
  Interval moment;  // upper bound for beta_k^k
  Interval beta;    // its k-th root
};

/// Bias statistic bound sum_{i,j} X(i) f_{i,j}(pi, tau_k) / rho([n]).
BiasStat bias_stat_stage1(int k, const std::vector<std::uint64_t>& primes);
BiasStat bias_stat_stage1(int k);

/// sum over subsets S of rho([n] \ S) prod_{s in S} tau_s by the mixed-table
/// linear combination, without dividing by rho([n]).
Interval subset_tau_sum(const std::vector<Interval>& pi, const std::vector<Interval>& tau);

std::vector<Interval> shearer_weights(const std::vector<std::uint64_t>& primes);

}  // namespace coverify::shearer
