#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coverify/check.hpp"
#include "coverify/rigor.hpp"

namespace coverify::primes {

struct SieveOptions {
  /// Upper bound on bytes spent on the sieve and the returned list.
  std::uint64_t memory_budget = std::uint64_t(1) << 30;
  /// Directory holding cached prime lists; empty disables caching.
  std::string cache_dir;
};

/// Primes p <= limit in ascending order (segmented sieve, 2^20-entry segments).
std::vector<std::uint32_t> sieve(std::uint64_t limit, const SieveOptions& opts = {});

/// Cache directory taken from the COVERIFY_PRIME_CACHE environment variable.
SieveOptions options_from_environment();

/// Boundary P_i of the stage schedule: 4, 222, 4000, then P_{i+1} = P_i^{1.5}.
Interval boundary(int i);

struct PrimeWindow {
  std::uint64_t lo = 0;  // inclusive
  std::uint64_t hi = 0;  // exclusive
  std::vector<std::uint32_t> primes;
};

/// Integer range [ceil(P_i), ceil(P_{i+1})) holding exactly the primes P_i <= p < P_{i+1}.
PrimeWindow window(int i, const SieveOptions& opts = {});
PrimeWindow window_from(std::uint64_t lo, std::uint64_t hi, const std::vector<std::uint32_t>& all);

/// Closed-form local factor tau_k(p) = sum_{i>=1} ((i+1)^k - i^k) / p^i for k in {2, 3}.
Interval tau_k(std::uint64_t p, int k);

/// Partial sum of the defining series for tau_k(p) through `terms` terms, plus a
/// certified geometric tail when `with_tail` is set. Any k >= 1.
Interval tau_series(std::uint64_t p, int k, int terms, bool with_tail);

struct WindowStats {
  int stage = 0;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::uint64_t count = 0;
  Interval prod_p_over_pm1;
  Interval sum_inv_sq;
  Interval sum_inv_cube;
  Interval sum_tau2;
  Interval sum_tau3;
  std::vector<Check> checks;
};

/// Certified sums over the primes of a list in ascending order.
WindowStats stats_of(const std::vector<std::uint32_t>& primes);

/// Window statistics for stage i in {1, 2, 3}. For i in {2, 3} the five
/// uniform window bounds are verified and a VerificationFailure is thrown on
/// the first violation.
WindowStats window_stats(int i, const SieveOptions& opts = {});

/// The five uniform window bounds used by every stage i >= 2.
std::vector<Check> uniform_bound_checks(int i, const WindowStats& s);

}  // namespace coverify::primes
