#include "coverify/locallemma.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace coverify::lll {

namespace {

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

Interval term_weight(const Modulus& m) {
  return Interval(static_cast<double>(m.count)) / Interval(static_cast<double>(m.n));
}

// |a_n| prod_{p|n} (1 + x_p) / n
Interval modulus_mass(const Modulus& m, const Weights& x) {
  Interval v = term_weight(m);
  for (int idx : m.prime_index) v = v * (Interval(1.0) + x[idx]);
  return v;
}

void check_size(const SieveInstance& inst, const Weights& x) {
  if (x.size() != inst.primes().size()) throw DomainError("weight vector does not match the instance primes");
  for (const Interval& v : x) {
    if (v.lo() < 0) throw DomainError("weights must be nonnegative");
  }
}

Interval norm2(const std::vector<Interval>& v) {
  Interval s(0.0);
  for (const Interval& x : v) s = s + square(x);
  return sqrt(s);
}

}  // namespace

SieveInstance SieveInstance::from_counts(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& moduli) {
  std::map<std::uint64_t, std::uint64_t> counts;
  for (auto [n, c] : moduli) {
    if (n <= 1) throw ValidationError("moduli must exceed 1");
    counts[n] += c;
  }
  SieveInstance inst;
  std::set<std::uint64_t> ps;
  for (auto [n, c] : counts) {
    if (c > n) throw ValidationError("residue count above the modulus " + std::to_string(n));
    for (std::uint64_t p : prime_factors(n)) ps.insert(p);
  }
  inst.primes_.assign(ps.begin(), ps.end());
  for (auto [n, c] : counts) {
    Modulus m;
    m.n = n;
    m.count = c;
    for (std::uint64_t p : prime_factors(n)) m.prime_index.push_back(inst.index_of(p));
    inst.moduli_.push_back(std::move(m));
  }
  return inst;
}

SieveInstance SieveInstance::from_system(const oracle::CongruenceSystem& system) {
  std::map<std::uint64_t, std::set<std::uint64_t>> classes;
  for (const auto& c : system.entries) classes[c.modulus].insert(c.residues.begin(), c.residues.end());
  std::vector<std::pair<std::uint64_t, std::uint64_t>> counts;
  for (const auto& [n, s] : classes) counts.emplace_back(n, s.size());
  return from_counts(counts);
}

int SieveInstance::index_of(std::uint64_t p) const {
  auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
  if (it == primes_.end() || *it != p) return -1;
  return static_cast<int>(it - primes_.begin());
}

int SieveInstance::max_omega() const {
  int k = 0;
  for (const Modulus& m : moduli_) k = std::max(k, static_cast<int>(m.prime_index.size()));
  return k;
}

std::vector<Interval> g_vector(const SieveInstance& inst, const Weights& x) {
  check_size(inst, x);
  std::vector<Interval> g(inst.primes().size(), Interval(0.0));
  for (const Modulus& m : inst.moduli()) {
    Interval v = modulus_mass(m, x);
    for (int idx : m.prime_index) g[idx] = g[idx] + v;
  }
  return g;
}

bool check_weights(const SieveInstance& inst, const Weights& x) {
  std::vector<Interval> g = g_vector(inst, x);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(x[i].lo() >= g[i].hi())) return false;
  }
  return true;
}

Interval density_lower_bound(const SieveInstance& inst, const Weights& x) {
  if (!check_weights(inst, x)) throw PreconditionError("weights are not certified for this instance");
  Interval s(0.0);
  for (const Modulus& m : inst.moduli()) s = s + modulus_mass(m, x);
  return exp(-s);
}

Interval bias_upper_bound(const SieveInstance& inst, const Weights& x, std::uint64_t n) {
  if (n == 0) throw DomainError("modulus must be positive");
  if (!check_weights(inst, x)) throw PreconditionError("weights are not certified for this instance");
  Interval s(0.0);
  for (std::uint64_t p : prime_factors(n)) {
    int idx = inst.index_of(p);
    if (idx >= 0) s = s + x[idx];
  }
  return exp(s) / Interval(static_cast<double>(n));
}

std::vector<Interval> s_k_bound(const SieveInstance& inst) {
  int kmax = inst.max_omega();
  // w(T) = sum over moduli whose prime set contains T of |a_n|/n.
  std::map<std::vector<int>, Interval> w;
  for (const Modulus& m : inst.moduli()) {
    Interval v = term_weight(m);
    int r = static_cast<int>(m.prime_index.size());
    for (int mask = 1; mask < (1 << r); ++mask) {
      std::vector<int> t;
      for (int b = 0; b < r; ++b) {
        if (mask & (1 << b)) t.push_back(m.prime_index[b]);
      }
      auto it = w.find(t);
      if (it == w.end()) {
        w.emplace(std::move(t), v);
      } else {
        it->second = it->second + v;
      }
    }
  }
  // Q_k = sum over |T| = k of w(T)^2.
  std::vector<Interval> q(kmax + 2, Interval(0.0));
  for (const auto& [t, v] : w) q[t.size()] = q[t.size()] + square(v);
  // Ordered tuples: S_1 = 2 Q_2, S_k = k! (k Q_k + (k+1) Q_{k+1}).
  std::vector<Interval> s;
  if (kmax == 0) return s;
  s.push_back(Interval(2.0) * q[2]);
  for (int k = 2; k <= kmax; ++k) {
    Interval inner = Interval(static_cast<double>(k)) * q[k] + Interval(static_cast<double>(k + 1)) * q[k + 1];
    s.push_back(factorial(k) * inner);
  }
  return s;
}

Interval b_op_direct(const std::vector<Interval>& s, const Interval& M) {
  if (s.empty()) return Interval(0.0);
  Interval b = sqrt(s[0]);
  for (std::size_t k = 2; k <= s.size(); ++k) {
    int km1 = static_cast<int>(k) - 1;
    b = b + factorial_div(M, km1) * sqrt(s[k - 1]);
  }
  return b;
}

SeriesSum curly_c(const Interval& M, const Interval& L) {
  Interval sqrtL = sqrt(L);
  auto term = [&](int k) {
    return sqrt(Interval(static_cast<double>(k))) * factorial_div(M, k - 1) / pow_int(sqrtL, k);
  };
  auto ratio = [&](int k) {
    Interval kk(static_cast<double>(k));
    return sqrt((kk + Interval(1.0)) / kk) * M / (kk * sqrtL);
  };
  SeriesSum tail = sum_series(term, ratio, 2);
  tail.value = Interval(1.0) / L + tail.value;
  return tail;
}

BopSplit b_op_bound(const std::vector<Interval>& s, const Interval& M, const Interval& P) {
  Interval L = P * log(P);
  BopSplit out;
  out.curly_c = curly_c(M, L).value;
  Interval cs(0.0);
  if (!s.empty()) cs = L * s[0];
  Interval sqrtL = sqrt(L);
  for (std::size_t k = 2; k <= s.size(); ++k) {
    int ki = static_cast<int>(k);
    cs = cs + factorial_div(M, ki - 1) * pow_int(sqrtL, ki) * s[k - 1] / sqrt(Interval(static_cast<double>(ki)));
  }
  out.curly_s = cs;
  out.bop_sq = out.curly_c * out.curly_s;
  return out;
}

BopSplit b_op_bound(const SieveInstance& inst, const Interval& M, const Interval& P) {
  for (std::uint64_t p : inst.primes()) {
    if (!(Interval(static_cast<double>(p)).certainly_ge(P + Interval(1.0)))) {
      throw DomainError("prime " + std::to_string(p) + " below the floor P + 1");
    }
  }
  return b_op_bound(s_k_bound(inst), M, P);
}

FixedPointCertificate newton_fixed_point(const SieveInstance& inst, const Interval& M, const NewtonOptions& opts) {
  std::size_t np = inst.primes().size();
  FixedPointCertificate cert;
  cert.M = M;
  Weights zero(np, Interval(0.0));
  std::vector<Interval> g0 = g_vector(inst, zero);
  Interval b_inf(0.0);
  for (const Interval& g : g0) b_inf = max(b_inf, g);
  cert.B_inf = b_inf;
  if (!(b_inf.hi() < 1)) throw PreconditionError("B_inf is not certainly below 1");
  for (const Interval& g : g0) cert.x0.push_back(g / (Interval(1.0) - g));
  cert.B_20 = norm2(cert.x0);
  cert.S = s_k_bound(inst);
  cert.B_op = b_op_direct(cert.S, M);
  cert.theta = cert.B_op / (Interval(1.0) - b_inf);
  if (cert.theta.hi() < 1) {
    cert.condition = cert.B_20 / (Interval(1.0) - cert.theta);
    cert.eps_norm = cert.B_20 * cert.theta / (Interval(1.0) - cert.theta);
    cert.condition_ok = cert.condition.hi() <= M.lo();
  } else {
    cert.condition = Interval(0.0, std::numeric_limits<double>::max());
    cert.eps_norm = cert.condition;
    cert.condition_ok = false;
  }
  if (!opts.iterate) return cert;

  // Floating-point Newton iteration with the diagonal preconditioner; the
  // result is only a candidate and is re-certified below.
  std::vector<double> x(np), d(np);
  for (std::size_t i = 0; i < np; ++i) {
    x[i] = cert.x0[i].mid();
    d[i] = g0[i].mid();
  }
  auto g_mid = [&](const std::vector<double>& pt) {
    Weights w;
    for (double v : pt) w.emplace_back(v);
    std::vector<double> out;
    for (const Interval& g : g_vector(inst, w)) out.push_back(g.mid());
    return out;
  };
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    std::vector<double> g = g_mid(x);
    double step2 = 0, norm = 0;
    for (std::size_t i = 0; i < np; ++i) {
      double step = (g[i] - x[i]) / (1.0 - d[i]);
      x[i] += step;
      step2 += step * step;
      norm += x[i] * x[i];
    }
    if (std::sqrt(norm) > M.hi()) throw DivergenceError("Newton iterates left the ball of radius M");
    if (std::sqrt(step2) < opts.step_tolerance) break;
  }
  if (it == opts.max_iterations) throw DivergenceError("Newton iteration did not stabilise");
  cert.iterations = it + 1;
  for (double delta = 0; delta <= 1e-6; delta = (delta == 0 ? 1e-16 : delta * 10)) {
    std::vector<double> cand(np);
    Weights w;
    for (std::size_t i = 0; i < np; ++i) {
      cand[i] = std::max(0.0, rounding::add_up(x[i], rounding::mul_up(delta, 1.0 + x[i])));
      w.emplace_back(cand[i]);
    }
    if (check_weights(inst, w)) {
      cert.has_fixed_point = true;
      cert.x_verified = cand;
      for (std::size_t i = 0; i < np; ++i) {
        cert.x_fix.emplace_back(std::min(cert.x0[i].lo(), cand[i]), cand[i]);
      }
      break;
    }
  }
  return cert;
}

ExpectationInputs inputs_from_window(const primes::WindowStats& w, const Interval& P, const Interval& beta2,
                                     const Interval& beta3) {
  ExpectationInputs in;
  in.P = P;
  in.L = P * log(P);
  in.prod = w.prod_p_over_pm1;
  in.s2 = w.sum_inv_sq;
  in.s3 = w.sum_inv_cube;
  in.beta2 = beta2;
  in.beta3 = beta3;
  return in;
}

ExpectationInputs inputs_uniform(const Interval& P, const Interval& prod, const Interval& c2, const Interval& c3,
                                 const Interval& b2, const Interval& b3) {
  ExpectationInputs in;
  in.P = P;
  Interval logP = log(P);
  in.L = P * logP;
  Interval cube_scale = Interval(2.0) * P * P * logP;
  in.prod = prod;
  in.s2 = c2 / in.L;
  in.s3 = c3 / cube_scale;
  in.beta2 = b2 * sqrt(in.L);
  in.beta3 = b3 * cbrt(cube_scale);
  return in;
}

ExpectationBounds expectation_bounds(const ExpectationInputs& in, const Interval& M) {
  ExpectationBounds out;
  Interval b2sq = square(in.beta2);
  Interval pre2 = b2sq * square(in.prod);
  out.EG2 = pre2 * in.s2;
  out.EG3 = pow_int(in.beta3, 3) * pow_int(in.prod, 3) * in.s3;
  out.ES1 = pre2 * square(in.s2);
  for (int k = 2; k <= 6; ++k) {
    Interval kk(static_cast<double>(k));
    out.ESk.push_back(pre2 * kk * pow_int(in.s2, k) * (Interval(1.0) + in.s2 / kk));
  }
  SeriesSum c = curly_c(M, in.L);
  out.curly_c = c.value;

  Interval x = sqrt(in.L) * in.s2;  // each term carries (sqrt(L) s2)^n
  Interval coarse = Interval(1.0) + Interval(1.0) / in.P;
  auto base = [&](int n) {
    return sqrt(Interval(static_cast<double>(n))) * factorial_div(M, n - 1) * pow_int(x, n);
  };
  auto ratio = [&](int n) {
    Interval nn(static_cast<double>(n));
    return sqrt((nn + Interval(1.0)) / nn) * M * x / nn;
  };
  auto sharp_term = [&](int n) { return base(n) * (Interval(1.0) + in.s2 / Interval(static_cast<double>(n))); };
  SeriesSum sharp = sum_series(sharp_term, ratio, 2);
  SeriesSum plain = sum_series(base, ratio, 2);
  Interval lead = in.L * square(in.s2);
  out.ES = pre2 * (lead + sharp.value);
  out.ES_coarse = pre2 * (lead + coarse * plain.value);
  out.EBop2 = out.curly_c * out.ES;
  out.EBop2_coarse = out.curly_c * out.ES_coarse;
  out.series_terms = sharp.terms;
  return out;
}

}  // namespace coverify::lll
