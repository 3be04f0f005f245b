#pragma once

#include <functional>
#include <string>
#include <vector>

#include "coverify/check.hpp"
#include "coverify/config.hpp"
#include "coverify/locallemma.hpp"
#include "coverify/primes.hpp"
#include "coverify/rigor.hpp"
#include "coverify/shearer.hpp"

namespace coverify::stages {

/// Enclosures of OPT(w) = max sum of the w largest g/(1-g) over g >= 0 with
/// ||g||_p <= B, for w = 1..omega_max (index w - 1).
struct LinfProfile {
  Interval B;
  int p = 2;
  std::vector<Interval> opt;
  /// Per w, 0 when an equal split attains the upper bound, otherwise the
  /// (small, large) multiplicities of the best two-value candidate.
  std::vector<std::pair<int, int>> two_value;
  long nodes = 0;
};

LinfProfile linf_omega_profile(const Interval& B, int p, int omega_max);
Interval solve_linf_omega(const Interval& B, int p, int omega);

struct Bin {
  int i = 0;  // l^3 bin, 0 in the initial stage
  int j = 0;  // l^2 bin
  Interval B3;
  Interval B2;
  Interval Bop;
  Interval B_inf;
  Interval B20;
  Interval theta;
  Interval condition;  // B20 / (1 - theta), must stay below M
  Interval eps;        // B20 theta / (1 - theta)
  bool ok = false;
};

/// Rows w = 1..cutoff of max over bins of ||x^fix||_{inf,w}, and the slope
/// bounding row increments beyond the cutoff.
struct OmegaTable {
  std::vector<Interval> rows;
  Interval tail_slope;
};

/// e_j of the local factors: exact values e_0..e_J, then e_1^j / j!.
struct ElementarySource {
  std::vector<Interval> exact;
  Interval e1;
};

struct BiasUpdate {
  Interval series;  // 1 + sum_w exp(row_w) e_w
  Interval moment;  // beta^k / floor * series
  Interval beta;    // moment^{1/k}
  int terms = 0;
  Interval tail;
};

/// beta_k^k(next) <= beta_k^k / floor * (1 + sum_w exp(row_w) e_w), the tail
/// beyond the table cutoff closed by a ratio test.
BiasUpdate update_bias(const Interval& beta_k, const Interval& pi_good_floor, const OmegaTable& table,
                       const ElementarySource& e, int k);

struct StageCertificate {
  std::string name;
  std::vector<Check> checks;
  std::vector<Bin> bins;
  lll::ExpectationBounds expectations;
  Interval markov_total;
  Interval pi_good;
  Interval cap3;
  Interval cap2;
  Interval cap_op;
  Interval eps_sup;
  int worst_bin = -1;  // index into bins with the largest condition
  OmegaTable omega_table;
  BiasUpdate update2;
  BiasUpdate update3;
  long solver_nodes = 0;

  bool ok() const { return all_essential_ok(checks); }
};

struct Stage1Inputs {
  shearer::ChainCertificate chain;
  shearer::BiasStat beta2;
  shearer::BiasStat beta3;
  primes::WindowStats window;
  std::vector<std::uint32_t> window_primes;
};

Stage1Inputs stage1_inputs(const Stage1Config& cfg, const primes::SieveOptions& opts = {});

StageCertificate run_stage1(const Config& cfg, const Stage1Inputs& in);
StageCertificate run_stage_asymptotic(const Config& cfg);

struct InductionResult {
  std::vector<Check> checks;
  bool ok() const { return all_essential_ok(checks); }
};

/// Closure of the induction from the uniform ratios, and the base case at i = 2.
InductionResult induction_check(const Config& cfg, const Interval& beta2_next, const Interval& beta3_next,
                                const Interval& ratio2, const Interval& ratio3);

struct ProofResult {
  Config config;
  Stage1Inputs stage1_in;
  StageCertificate stage1;
  StageCertificate asym;
  InductionResult induction;
  std::vector<primes::WindowStats> windows;
  std::vector<Check> window_checks;
  bool proved = false;
  /// Name of the first failing essential check, empty when proved.
  std::string failure;
  std::vector<std::pair<std::string, double>> timings;
};

using Progress = std::function<void(const std::string&)>;

ProofResult run_proof(const Config& cfg, const primes::SieveOptions& opts = {}, const Progress& progress = {});

/// Every check of a proof in report order.
std::vector<Check> all_checks(const ProofResult& r);

}  // namespace coverify::stages
