#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "coverify/oracle.hpp"
#include "coverify/primes.hpp"
#include "coverify/rigor.hpp"

namespace coverify::lll {

struct Modulus {
  std::uint64_t n = 0;
  std::uint64_t count = 0;       // |a_n mod n|
  std::vector<int> prime_index;  // indices into SieveInstance::primes()
};

/// Moduli with residue-set sizes, and the primes dividing them.
class SieveInstance {
 public:
  SieveInstance() = default;
  /// Pairs (n, |a_n|); repeated moduli have their counts added.
  static SieveInstance from_counts(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& moduli);
  /// Uses |a_n| = size of the union of the residue sets listed for n.
  static SieveInstance from_system(const oracle::CongruenceSystem& system);

  const std::vector<Modulus>& moduli() const { return moduli_; }
  const std::vector<std::uint64_t>& primes() const { return primes_; }
  int index_of(std::uint64_t p) const;
  /// Largest number of distinct prime factors of a modulus.
  int max_omega() const;

 private:
  std::vector<Modulus> moduli_;
  std::vector<std::uint64_t> primes_;
};

using Weights = std::vector<Interval>;

/// G_p(x) = sum_{n: p | n} |a_n| prod_{p' | n} (1 + x_{p'}) / n for each prime.
std::vector<Interval> g_vector(const SieveInstance& inst, const Weights& x);

/// Certified x_p >= G_p(x) for every prime.
bool check_weights(const SieveInstance& inst, const Weights& x);

/// exp(-sum_n |a_n| prod_{p|n}(1 + x_p) / n). Throws PreconditionError unless check_weights holds.
Interval density_lower_bound(const SieveInstance& inst, const Weights& x);

/// exp(sum_{p | n} x_p) / n, with x_p = 0 for primes outside the instance.
Interval bias_upper_bound(const SieveInstance& inst, const Weights& x, std::uint64_t n);

/// S_1, ..., S_kmax where kmax = max_omega(); every later S_k vanishes.
std::vector<Interval> s_k_bound(const SieveInstance& inst);

/// sqrt(S_1) + sum_{k>=2} M^{k-1}/(k-1)! sqrt(S_k).
Interval b_op_direct(const std::vector<Interval>& s, const Interval& M);

/// Curly-C factor 1/L + sum_{k>=2} sqrt(k) M^{k-1} / ((k-1)! L^{k/2}) with L = P log P.
SeriesSum curly_c(const Interval& M, const Interval& L);

struct BopSplit {
  Interval curly_c;
  Interval curly_s;
  Interval bop_sq;  // curly_c * curly_s, an upper bound for B_op(M)^2
};

BopSplit b_op_bound(const std::vector<Interval>& s, const Interval& M, const Interval& P);
/// Same, checking that every prime of the instance is at least P + 1.
BopSplit b_op_bound(const SieveInstance& inst, const Interval& M, const Interval& P);

struct FixedPointCertificate {
  Interval M;
  Interval B_inf;
  Interval B_20;
  Interval B_op;
  Interval theta;
  Interval condition;  // B_20 / (1 - theta)
  Interval eps_norm;
  std::vector<Interval> x0;
  std::vector<Interval> S;
  bool condition_ok = false;
  /// Iterate mode: a verified point x_verified with G(x) <= x, and the
  /// enclosure [x0, x_verified] of the least fixed point.
  bool has_fixed_point = false;
  std::vector<double> x_verified;
  std::vector<Interval> x_fix;
  int iterations = 0;
};

struct NewtonOptions {
  bool iterate = true;
  int max_iterations = 10000;
  double step_tolerance = 1e-15;
};

FixedPointCertificate newton_fixed_point(const SieveInstance& inst, const Interval& M, const NewtonOptions& opts = {});

/// Window data feeding the expectation bounds.
struct ExpectationInputs {
  Interval P;
  Interval L;  // P log P
  Interval prod;  // prod p/(p-1) over the window
  Interval s2;    // sum 1/(p-1)^2
  Interval s3;    // sum 1/(p-1)^3
  Interval beta2;
  Interval beta3;
};

ExpectationInputs inputs_from_window(const primes::WindowStats& w, const Interval& P, const Interval& beta2,
                                     const Interval& beta3);

/// Inputs valid for every window i >= 2 from the uniform window constants and
/// the inductive bias bounds beta_2 <= b2 (P log P)^{1/2}, beta_3 <= b3 (2 P^2 log P)^{1/3}.
ExpectationInputs inputs_uniform(const Interval& P, const Interval& prod, const Interval& c2, const Interval& c3,
                                 const Interval& b2, const Interval& b3);

struct ExpectationBounds {
  Interval EG2;  // E ||G(0)||_2^2
  Interval EG3;  // E ||G(0)||_3^3
  Interval ES1;
  std::vector<Interval> ESk;  // k = 2..6
  Interval curly_c;
  Interval ES;              // E curly-S with the bracket (1 + s2/n)
  Interval ES_coarse;       // E curly-S with the bracket (1 + 1/P)
  Interval EBop2;           // curly_c * ES
  Interval EBop2_coarse;    // curly_c * ES_coarse
  int series_terms = 0;
};

ExpectationBounds expectation_bounds(const ExpectationInputs& in, const Interval& M);

}  // namespace coverify::lll
