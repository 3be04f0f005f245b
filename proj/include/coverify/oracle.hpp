#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "coverify/errors.hpp"

namespace coverify::oracle {

struct Congruence {
  std::uint64_t modulus = 0;
  std::vector<std::uint64_t> residues;  // sorted, distinct, each < modulus
};

/// Finite family of residue sets a_m mod m. Moduli may repeat.
struct CongruenceSystem {
  std::vector<Congruence> entries;

  /// Moduli pairwise distinct and every residue set has at most one element.
  bool distinct() const;
  /// lcm of the moduli (1 for the empty system). Throws ResourceError on overflow.
  std::uint64_t lcm() const;
};

/// Parses lines "r1,r2,... mod m"; blank lines and '#' comments are skipped.
CongruenceSystem parse_system(std::string_view text);
CongruenceSystem load_system(const std::string& path);
std::string serialize(const CongruenceSystem& system);
/// Sorted residues within entries, entries sorted by (modulus, residues).
CongruenceSystem normalize(CongruenceSystem system);

struct OracleOptions {
  /// Largest period scanned, counted in residues.
  std::uint64_t budget = 100'000'000;
  /// Periods up to this size are scanned with a single bitset.
  std::uint64_t bitset_limit = std::uint64_t(1) << 27;
};

/// Exact density of the uncovered set R = Z minus the union of the classes.
mpq_class uncovered_density(const CongruenceSystem& system, const OracleOptions& opts = {});

/// |R mod Q| by a bitset over Z/QZ.
std::uint64_t uncovered_count_direct(const CongruenceSystem& system);

/// |R mod Q| fiber by fiber over r mod A, for A | Q with gcd(A, Q/A) = 1.
std::uint64_t uncovered_count_fibered(const CongruenceSystem& system, std::uint64_t a);

/// A divisor A of Q coprime to Q/A with Q/A <= limit (prime powers kept whole).
std::uint64_t fiber_split(std::uint64_t q, std::uint64_t limit);

/// True when every residue mod Q is hit.
bool covers(const CongruenceSystem& system, const OracleOptions& opts = {});

/// Fiber x = r + Q_i t: maps each new factor n to the residues of t it removes.
/// A key of 1 means the whole fiber is removed.
std::map<std::uint64_t, std::vector<std::uint64_t>> fiber_decompose(const CongruenceSystem& system,
                                                                      std::uint64_t r, std::uint64_t qi);

/// Uncovered density of a fiber given by fiber_decompose.
mpq_class fiber_density(const std::map<std::uint64_t, std::vector<std::uint64_t>>& fiber,
                        const OracleOptions& opts = {});

/// n |R cap (b mod n)| / |R|.
mpq_class empirical_bias(const CongruenceSystem& system, std::uint64_t n, std::uint64_t b,
                         const OracleOptions& opts = {});
mpq_class max_bias(const CongruenceSystem& system, std::uint64_t n, const OracleOptions& opts = {});

/// max over nonempty fibers r mod Q_i and classes b mod n of
/// n |R cap (r mod Q_i) cap (b mod n)| / |R cap (r mod Q_i)|.
mpq_class fibered_max_bias(const CongruenceSystem& system, std::uint64_t qi, std::uint64_t n,
                           const OracleOptions& opts = {});

std::uint64_t gcd64(std::uint64_t a, std::uint64_t b);
std::uint64_t lcm64(std::uint64_t a, std::uint64_t b);
/// Inverse of a mod m for gcd(a, m) = 1 and m >= 1.
std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m);

}  // namespace coverify::oracle
