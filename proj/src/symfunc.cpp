#include "coverify/symfunc.hpp"

#include <algorithm>

namespace coverify::symfunc {

SymTable elementary(const std::vector<Interval>& weights, int max_degree) {
  int n = static_cast<int>(weights.size());
  if (max_degree < 0 || max_degree > n) throw DomainError("max_degree must lie in [0, number of weights]");
  SymTable t;
  t.e.assign(max_degree + 1, Interval(0.0));
  t.e[0] = Interval(1.0);
  int filled = 0;
  for (const Interval& w : weights) {
    if (w.lo() < 0) throw DomainError("elementary symmetric DP needs nonnegative weights");
    filled = std::min(filled + 1, max_degree);
    for (int i = filled; i >= 1; --i) t.e[i] = t.e[i] + t.e[i - 1] * w;
  }
  return t;
}

SymTable elementary(const std::vector<Interval>& weights) {
  return elementary(weights, static_cast<int>(weights.size()));
}

SymTable mixed(const std::vector<Interval>& pi, const std::vector<Interval>& tau, int jmax) {
  if (pi.size() != tau.size()) throw DomainError("pi and tau must be aligned");
  int n = static_cast<int>(pi.size());
  int jcap = (jmax < 0) ? n : std::min(jmax, n);
  SymTable t;
  t.f.assign(n + 1, std::vector<Interval>(jcap + 1, Interval(0.0)));
  t.f[0][0] = Interval(1.0);
  for (int s = 0; s < n; ++s) {
    const Interval& a = pi[s];
    const Interval& b = tau[s];
    // After s factors only entries with i + j <= s are nonzero.
    for (int i = std::min(s + 1, n); i >= 0; --i) {
      for (int j = std::min(s + 1 - i, jcap); j >= 0; --j) {
        Interval v = t.f[i][j];
        if (i > 0) v = v + t.f[i - 1][j] * a;
        if (j > 0) v = v + t.f[i][j - 1] * b;
        t.f[i][j] = v;
      }
    }
  }
  t.e.resize(n + 1);
  for (int i = 0; i <= n; ++i) t.e[i] = t.f[i][0];
  return t;
}

std::vector<mpq_class> elementary_exact(const std::vector<mpq_class>& weights) {
  std::vector<mpq_class> e(weights.size() + 1, mpq_class(0));
  e[0] = 1;
  std::size_t filled = 0;
  for (const mpq_class& w : weights) {
    ++filled;
    for (std::size_t i = filled; i >= 1; --i) e[i] += e[i - 1] * w;
  }
  return e;
}

std::vector<mpq_class> x_sequence_exact(const mpq_class& theta, int n) {
  if (n < 0) throw DomainError("x_sequence needs n >= 0");
  std::vector<mpq_class> x(n + 1);
  x[0] = 1;
  for (int i = 1; i <= n; ++i) {
    mpq_class s = 0;
    mpz_class binom = 1;  // C(i-1, j)
    for (int j = 0; j < i; ++j) {
      s += binom * x[j];
      binom = binom * (i - 1 - j) / (j + 1);
    }
    x[i] = -theta * s;
  }
  return x;
}

XSequence x_sequence(const Interval& theta, int n) {
  if (n < 0) throw DomainError("x_sequence needs n >= 0");
  XSequence out;
  out.theta = theta;
  out.values.reserve(n + 1);
  if (theta.is_point()) {
    for (const mpq_class& v : x_sequence_exact(mpq_class(theta.lo()), n)) out.values.push_back(Interval::rational(v));
    return out;
  }
  out.values.push_back(Interval(1.0));
  for (int i = 1; i <= n; ++i) {
    Interval s(0.0);
    mpz_class binom = 1;
    for (int j = 0; j < i; ++j) {
      s = s + Interval::integer(binom) * out.values[j];
      binom = binom * (i - 1 - j) / (j + 1);
    }
    out.values.push_back(-(theta * s));
  }
  return out;
}

Interval rho(const std::vector<Interval>& weights, const Interval& theta) {
  for (const Interval& w : weights) {
    if (w.lo() < 0 || rounding::mul_up(w.hi(), theta.hi()) > 1.0) {
      throw DomainError("weight " + to_string(w) + " not certainly within [0, 1/theta]");
    }
  }
  SymTable t = elementary(weights);
  XSequence x = x_sequence(theta, static_cast<int>(weights.size()));
  Interval s(0.0);
  for (std::size_t i = 0; i < t.e.size(); ++i) s = s + x.values[i] * t.e[i];
  return s;
}

mpq_class rho_exact(const std::vector<mpq_class>& weights, const mpq_class& theta) {
  for (const mpq_class& w : weights) {
    if (w < 0 || w * theta > 1) throw DomainError("weight outside [0, 1/theta]");
  }
  std::vector<mpq_class> e = elementary_exact(weights);
  std::vector<mpq_class> x = x_sequence_exact(theta, static_cast<int>(weights.size()));
  mpq_class s = 0;
  for (std::size_t i = 0; i < e.size(); ++i) s += x[i] * e[i];
  return s;
}

Interval brute_xi(const std::vector<Interval>& weights, const Interval& theta) {
  int n = static_cast<int>(weights.size());
  if (n > 4) throw SizeError("brute_xi supports at most 4 weights");
  int v = (1 << n) - 1;  // vertices: nonempty subsets, encoded as masks 1..v
  std::vector<Interval> z(v + 1, Interval(0.0));
  for (int s = 1; s <= v; ++s) {
    Interval p = theta;
    for (int t = 0; t < n; ++t) {
      if (s & (1 << t)) p = p * weights[t];
    }
    z[s] = -p;
  }
  // Sum over families of pairwise disjoint vertices: recurse on the lowest
  // uncovered element, which is either left out or covered by a vertex.
  Interval total(0.0);
  auto rec = [&](auto&& self, int used, int next, const Interval& prod) -> void {
    if (next == n) {
      total = total + prod;
      return;
    }
    if (used & (1 << next)) {
      self(self, used, next + 1, prod);
      return;
    }
    self(self, used, next + 1, prod);
    // Elements below `next` are already decided, so new vertices avoid them.
    int free_mask = v & ~used & ~((1 << next) - 1);
    for (int s = free_mask; s > 0; s = (s - 1) & free_mask) {
      if (s & (1 << next)) self(self, used | s, next + 1, prod * z[s]);
    }
  };
  rec(rec, 0, 0, Interval(1.0));
  return total;
}

std::vector<Interval> sorted_descending(std::vector<Interval> weights) {
  std::stable_sort(weights.begin(), weights.end(),
                   [](const Interval& a, const Interval& b) { return a.hi() > b.hi(); });
  return weights;
}

}  // namespace coverify::symfunc
