#pragma once

#include <vector>

#include <gmpxx.h>

#include "coverify/rigor.hpp"

namespace coverify::symfunc {

/// Elementary symmetric functions e_0..e_d and, for mixed tables, f[i][j]
/// with sum f_{i,j} x^i y^j = prod_t (1 + x pi_t + y tau_t).
struct SymTable {
  std::vector<Interval> e;
  std::vector<std::vector<Interval>> f;
};

SymTable elementary(const std::vector<Interval>& weights, int max_degree);
SymTable elementary(const std::vector<Interval>& weights);

/// Full mixed table for i + j <= n. `jmax` caps the tau degree (-1: no cap).
SymTable mixed(const std::vector<Interval>& pi, const std::vector<Interval>& tau, int jmax = -1);

std::vector<mpq_class> elementary_exact(const std::vector<mpq_class>& weights);

/// X_theta(0..n): X(0) = 1, X(i) = -theta sum_{j<i} C(i-1, j) X(j).
struct XSequence {
  Interval theta;
  std::vector<Interval> values;
};

/// Uses exact rational arithmetic when theta is a point, intervals otherwise.
XSequence x_sequence(const Interval& theta, int n);
std::vector<mpq_class> x_sequence_exact(const mpq_class& theta, int n);

/// Shearer function rho_theta = sum_i X_theta(i) e_i(weights).
/// Throws DomainError unless every weight is certainly <= 1/theta.
Interval rho(const std::vector<Interval>& weights, const Interval& theta);
mpq_class rho_exact(const std::vector<mpq_class>& weights, const mpq_class& theta);

/// Independent-set polynomial of the subset-intersection graph on the
/// nonempty subsets of [n], evaluated at z_S = -theta prod_{t in S} w_t. n <= 4.
Interval brute_xi(const std::vector<Interval>& weights, const Interval& theta);

/// Weights sorted in descending order of upper endpoint.
std::vector<Interval> sorted_descending(std::vector<Interval> weights);

}  // namespace coverify::symfunc
