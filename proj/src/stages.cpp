#include "coverify/stages.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "coverify/symfunc.hpp"

namespace coverify::stages {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kThirdBelow = 1.0 / 3.0;  // the double nearest 1/3 lies below it
const double kThirdAbove = std::nextafter(1.0 / 3.0, 1.0);

Interval one() { return Interval(1.0); }
Interval num(double v) { return Interval(v); }

Interval h(const Interval& g) { return g / (one() - g); }
Interval root_p(const Interval& x, int p) { return p == 2 ? sqrt(x) : cbrt(x); }

Interval phi2(double c) {
  Interval x(c);
  return x * square(one() - x);
}

// Largest c <= psi(t), psi the inverse of c(1-c)^2 on [0, 1/3].
double psi_lo(double t) {
  if (!(t > 0)) return 0.0;
  double lo = 0.0, hi = kThirdAbove;
  for (int it = 0; it < 80; ++it) {
    double m = lo + (hi - lo) / 2;
    if (m <= lo || m >= hi) break;
    if (phi2(m).hi() <= t) {
      lo = m;
    } else {
      hi = m;
    }
  }
  return lo;
}

// Smallest c >= psi(t), capped just above 1/3.
double psi_hi(double t) {
  if (!(t > 0)) return 0.0;
  double lo = 0.0, hi = kThirdAbove;
  for (int it = 0; it < 80; ++it) {
    double m = lo + (hi - lo) / 2;
    if (m <= lo || m >= hi) break;
    if (phi2(m).lo() >= t) {
      hi = m;
    } else {
      lo = m;
    }
  }
  return hi;
}

struct Node {
  double l;
  double u;
  int depth;
};

// Upper bound for a h(c_s) + bb h(c_l) over the two-value stationary points
// with a c_s^p + bb c_l^p = b^p, c_s < mid < c_l. Branches that cannot exceed
// `floor` are discarded; returns -inf when nothing survives.
double two_value_bound(double b, int p, int a, int bb, double floor, long& nodes) {
  const Interval bp = pow_int(num(b), p);
  const Interval ai = num(a);
  const Interval bbi = num(bb);
  const double l0 = p == 2 ? kThirdBelow : 0.5;
  double u0 = (num(b) / root_p(bbi, p)).hi();
  u0 = std::min(u0, std::nextafter(1.0, 0.0));
  if (!(u0 > l0)) return -kInf;
  const double phi_max = (Interval(4.0) / Interval(27.0)).hi();

  double best = -kInf;
  std::vector<Node> stack{{l0, u0, 0}};
  while (!stack.empty()) {
    Node n = stack.back();
    stack.pop_back();
    ++nodes;
    double cs_lo, cs_hi;
    if (p == 2) {
      cs_lo = psi_lo(phi2(n.u).lo());
      cs_hi = psi_hi(n.l <= kThirdBelow ? phi_max : phi2(n.l).hi());
    } else {
      cs_lo = (one() - num(n.u)).lo();
      cs_hi = (one() - num(n.l)).hi();
    }
    double rem_hi = ((bp - bbi * pow_int(num(n.l), p)) / ai).hi();
    if (rem_hi < 0) continue;
    cs_hi = std::min(cs_hi, root_p(num(rem_hi), p).hi());
    double rem_lo = ((bp - bbi * pow_int(num(n.u), p)) / ai).lo();
    if (rem_lo > 0) cs_lo = std::max(cs_lo, root_p(num(rem_lo), p).lo());
    if (cs_lo > cs_hi) continue;
    double v = (ai * h(num(cs_hi)) + bbi * h(num(n.u))).hi();
    if (v <= floor) continue;
    if (n.u - n.l <= 1e-13 * n.u || n.depth >= 80) {
      best = std::max(best, v);
      continue;
    }
    double m = n.l + (n.u - n.l) / 2;
    stack.push_back({n.l, m, n.depth + 1});
    stack.push_back({m, n.u, n.depth + 1});
  }
  return best;
}

Interval equal_split(const Interval& b, int p, int k) {
  Interval kk = num(k);
  return kk * h(b / root_p(kk, p));
}

// Runs fn(0..n-1) on hardware threads; fn writes only to slot i.
template <class Fn>
void parallel_for(int n, Fn fn) {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  int workers = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(std::max(n, 1))));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto body = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

Check status_check(std::string name, bool ok, bool essential = true, std::string note = {}) {
  Check c = make_check(std::move(name), Interval(ok ? 1.0 : 0.0), ">=", one(), essential, std::move(note));
  return c;
}

Interval relative_band(const Interval& ref, const Interval& slack) {
  Interval lo = ref * (one() - slack);
  Interval hi = ref * (one() + slack);
  return Interval(lo.lo(), hi.hi());
}

Check near_check(std::string name, const Interval& value, const Interval& ref, const Interval& slack) {
  return make_check(std::move(name), value, "in", relative_band(ref, slack), false);
}

std::string lit(const Interval& x) {
  if (x.is_point()) return to_decimal(x.lo());
  char buf[64];
  for (int digits = 1; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, x.mid());
    if (Interval::decimal(buf) == x) return buf;
  }
  return to_string(x);
}

Bin make_bin(int i, int j, const Interval& B3, const Interval& B2, const Interval& bop, const Interval& binf,
             const Interval& M) {
  Bin bin;
  bin.i = i;
  bin.j = j;
  bin.B3 = B3;
  bin.B2 = B2;
  bin.Bop = bop;
  bin.B_inf = binf;
  const Interval unbounded(0.0, std::numeric_limits<double>::max());
  if (!(binf.hi() < 1)) {
    bin.B20 = bin.theta = bin.condition = bin.eps = unbounded;
    return bin;
  }
  bin.B20 = B2 / (one() - binf);
  bin.theta = bop / (one() - binf);
  if (!(bin.theta.hi() < 1)) {
    bin.condition = bin.eps = unbounded;
    return bin;
  }
  bin.condition = bin.B20 / (one() - bin.theta);
  bin.eps = bin.B20 * bin.theta / (one() - bin.theta);
  bin.ok = bin.condition.certainly_lt(M);
  return bin;
}

std::string bin_label(const Bin& b) {
  if (b.i == 0) return "bin j=" + std::to_string(b.j);
  return "bin (i=" + std::to_string(b.i) + ", j=" + std::to_string(b.j) + ")";
}

void add_bin_checks(StageCertificate& cert, const Interval& M, const std::string& mname) {
  int worst = -1;
  int first_bad = -1;
  Interval eps_sup(0.0);
  for (int k = 0; k < static_cast<int>(cert.bins.size()); ++k) {
    const Bin& b = cert.bins[k];
    if (first_bad < 0 && !b.ok) first_bad = k;
    if (worst < 0 || b.condition.hi() > cert.bins[worst].condition.hi()) worst = k;
    eps_sup = max(eps_sup, b.eps);
  }
  cert.worst_bin = worst;
  cert.eps_sup = eps_sup;
  const Bin& w = cert.bins[worst];
  cert.checks.push_back(make_check("worst " + bin_label(w) + ": B_20/(1-theta) < M = " + mname, w.condition, "<", M,
                                   true, std::to_string(cert.bins.size()) + " bins"));
  if (first_bad >= 0 && first_bad != worst) {
    const Bin& f = cert.bins[first_bad];
    cert.checks.push_back(make_check("first failing " + bin_label(f) + ": B_20/(1-theta) < M = " + mname,
                                     f.condition, "<", M));
  }
}

std::vector<Interval> combine_rows(const std::vector<LinfProfile>& profiles, const std::vector<Interval>& eps,
                                   int cutoff) {
  std::vector<Interval> rows(cutoff, Interval(0.0));
  for (int w = 1; w <= cutoff; ++w) {
    Interval sw = sqrt(num(w));
    Interval row(0.0);
    for (std::size_t b = 0; b < profiles.size(); ++b) row = max(row, profiles[b].opt[w - 1] + sw * eps[b]);
    if (w > 1) row = max(row, rows[w - 2]);
    rows[w - 1] = row;
  }
  return rows;
}

void add_table_checks(StageCertificate& cert, const std::vector<Interval>& ref, const Interval& slack,
                      const std::string& label) {
  for (std::size_t w = 0; w < ref.size() && w < cert.omega_table.rows.size(); ++w) {
    cert.checks.push_back(make_check(label + " table row w=" + std::to_string(w + 1) + " <= " + lit(ref[w]) + " + " +
                                         lit(slack),
                                     cert.omega_table.rows[w], "<=", ref[w] + slack, false));
  }
}

ElementarySource exact_source(const std::vector<std::uint32_t>& primes, int k, int jmax) {
  std::vector<Interval> tau;
  tau.reserve(primes.size());
  for (std::uint32_t p : primes) tau.push_back(primes::tau_k(p, k));
  ElementarySource src;
  src.exact = symfunc::elementary(tau, jmax).e;
  src.e1 = src.exact.size() > 1 ? src.exact[1] : Interval(0.0);
  return src;
}

Interval power_of(const Interval& P, const Interval& e) {
  if (e.is_point()) {
    double v = e.lo();
    if (v == std::floor(v) && std::fabs(v) < 64) return pow_int(P, static_cast<int>(v));
    if (2 * v == std::floor(2 * v) && std::fabs(v) < 64) {
      return pow_int(P, static_cast<int>(std::floor(v))) * sqrt(P);
    }
  }
  return pow(P, e);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

LinfProfile linf_omega_profile(const Interval& B, int p, int omega_max) {
  if (p != 2 && p != 3) throw DomainError("p must be 2 or 3");
  if (omega_max < 1) throw DomainError("omega must be at least 1");
  if (!(B.hi() < 1)) throw DomainError("B must be below 1");
  if (B.lo() < 0) throw DomainError("B must be nonnegative");
  LinfProfile prof;
  prof.B = B;
  prof.p = p;
  const Interval bhi(B.hi());
  const Interval blo(B.lo());
  std::vector<double> eq_best_hi(omega_max + 1, 0.0), eq_best_lo(omega_max + 1, 0.0);
  for (int k = 1; k <= omega_max; ++k) {
    eq_best_hi[k] = std::max(eq_best_hi[k - 1], equal_split(bhi, p, k).hi());
    eq_best_lo[k] = std::max(eq_best_lo[k - 1], equal_split(blo, p, k).lo());
  }
  std::vector<double> cand(omega_max + 1, -kInf);
  std::vector<std::pair<int, int>> who(omega_max + 1, {0, 0});
  const double mid = p == 2 ? kThirdBelow : 0.5;
  for (int bb = 1; bb < omega_max; ++bb) {
    double top = (bhi / root_p(num(bb), p)).hi();
    if (!(top > mid)) break;
    for (int a = 1; a + bb <= omega_max; ++a) {
      double v = two_value_bound(B.hi(), p, a, bb, eq_best_hi[a + bb], prof.nodes);
      if (v > cand[a + bb]) {
        cand[a + bb] = v;
        who[a + bb] = {a, bb};
      }
    }
  }
  double run = -kInf;
  std::pair<int, int> run_who{0, 0};
  for (int w = 1; w <= omega_max; ++w) {
    if (cand[w] > run) {
      run = cand[w];
      run_who = who[w];
    }
    double hi = eq_best_hi[w];
    std::pair<int, int> tv{0, 0};
    if (run > hi) {
      hi = run;
      tv = run_who;
    }
    prof.opt.emplace_back(std::min(eq_best_lo[w], hi), hi);
    prof.two_value.push_back(tv);
  }
  return prof;
}

Interval solve_linf_omega(const Interval& B, int p, int omega) {
  return linf_omega_profile(B, p, omega).opt.back();
}

BiasUpdate update_bias(const Interval& beta_k, const Interval& pi_good_floor, const OmegaTable& table,
                       const ElementarySource& e, int k) {
  if (k != 2 && k != 3) throw DomainError("bias update for k = 2, 3");
  if (table.rows.empty()) throw DomainError("empty omega table");
  if (!(pi_good_floor.lo() > 0)) throw DomainError("pi_good floor must be positive");
  int cutoff = static_cast<int>(table.rows.size());
  auto e_w = [&](int w) {
    if (w < static_cast<int>(e.exact.size())) return e.exact[w];
    return factorial_div(e.e1, w);
  };
  BiasUpdate out;
  Interval s = one();
  for (int w = 1; w <= cutoff; ++w) s = s + exp(table.rows[w - 1]) * e_w(w);
  Interval first = exp(table.rows[cutoff - 1] + table.tail_slope) * factorial_div(e.e1, cutoff + 1);
  first = Interval(std::max(0.0, first.lo()), first.hi());  // product of nonnegative factors
  Interval ratio = exp(table.tail_slope) * e.e1 / num(cutoff + 2);
  if (!(ratio.hi() < 1)) throw TailDivergence("bias update tail ratio is not below 1");
  out.tail = geometric_tail(ratio, first);
  out.series = s + out.tail;
  out.terms = cutoff;
  out.moment = pow_int(beta_k, k) / pi_good_floor * out.series;
  out.beta = root_p(out.moment, k);
  return out;
}

Stage1Inputs stage1_inputs(const Stage1Config& cfg, const primes::SieveOptions& opts) {
  Stage1Inputs in;
  std::vector<std::uint64_t> ps = shearer::primes_between_4_and(static_cast<std::uint64_t>(cfg.shearer_limit));
  in.chain = shearer::verify_chain(ps);
  const Interval unknown(0.0, std::numeric_limits<double>::max());
  if (in.chain.holds) {
    in.beta2 = shearer::bias_stat_stage1(2, ps);
    in.beta3 = shearer::bias_stat_stage1(3, ps);
  } else {
    in.beta2 = {2, unknown, unknown};
    in.beta3 = {3, unknown, unknown};
  }
  primes::PrimeWindow w = primes::window(1, opts);
  in.window = primes::stats_of(w.primes);
  in.window.stage = 1;
  in.window.lo = w.lo;
  in.window.hi = w.hi;
  in.window_primes = std::move(w.primes);
  return in;
}

StageCertificate run_stage1(const Config& cfg, const Stage1Inputs& in) {
  const Stage1Config& s = cfg.stage1;
  const Interval f = cfg.pi_good_floor;
  const Interval keep = one() - f;
  StageCertificate cert;
  cert.name = "initial stage";
  std::string plimit = std::to_string(s.shearer_limit);
  std::string chain_note = in.chain.holds ? std::to_string(in.chain.primes.size()) + " primes"
                                          : in.chain.reason + " at " + std::to_string(in.chain.fail_prime);
  cert.checks.push_back(status_check("Shearer chain ordered and positive for 4 < p < " + plimit, in.chain.holds,
                                     true, chain_note));
  cert.checks.push_back(make_check("beta_2(1) <= " + lit(s.beta2), in.beta2.beta, "<=", s.beta2));
  cert.checks.push_back(make_check("beta_3(1) <= " + lit(s.beta3), in.beta3.beta, "<=", s.beta3));

  lll::ExpectationInputs ein = lll::inputs_from_window(in.window, primes::boundary(1), s.beta2, s.beta3);
  cert.expectations = lll::expectation_bounds(ein, s.M);
  const lll::ExpectationBounds& E = cert.expectations;
  cert.checks.push_back(make_check("E ||G(0)||_2^2 <= " + lit(s.EG2), E.EG2, "<=", s.EG2));
  cert.checks.push_back(make_check("E B_op(M)^2 <= " + lit(s.EBop2), E.EBop2, "<=", s.EBop2));
  cert.checks.push_back(make_check("E B_op(M)^2 with bracket 1 + 1/P <= " + lit(s.EBop2), E.EBop2_coarse, "<=",
                                   s.EBop2, false));

  cert.markov_total = s.split2 * E.EG2 / s.EG2 + s.split_op * E.EBop2 / s.EBop2;
  cert.checks.push_back(make_check("Markov total C_2 E||G||^2 + C_op E B_op^2 <= 1", cert.markov_total, "<=", one()));
  cert.pi_good = one() - keep * cert.markov_total;
  cert.checks.push_back(make_check("pi_good >= " + lit(f), cert.pi_good, ">=", f));

  cert.cap2 = s.EG2 / (s.split2 * keep);
  cert.cap_op = s.EBop2 / (s.split_op * keep);
  Interval b2max = sqrt(cert.cap2);
  cert.checks.push_back(near_check("cap on ||G||_2^2 matches " + lit(s.ref_cap2), cert.cap2, s.ref_cap2, cfg.cap_slack));
  cert.checks.push_back(near_check("cap on ||G||_2 matches " + lit(s.ref_B2max), b2max, s.ref_B2max, cfg.cap_slack));

  const int K = s.K;
  const Interval KK = num(K);
  for (int j = 1; j <= K; ++j) {
    Interval B2 = sqrt(num(j) / KK * cert.cap2);
    Interval bop = sqrt(num(K - j + 1) / KK * cert.cap_op);
    cert.bins.push_back(make_bin(0, j, Interval(0.0), B2, bop, B2, s.M));
  }
  add_bin_checks(cert, s.M, lit(s.M));
  cert.checks.push_back(make_check("sup eps <= " + lit(s.ref_eps), cert.eps_sup, "<=", s.ref_eps, false));

  const int cutoff = s.omega_cutoff;
  std::vector<LinfProfile> profiles(K);
  std::vector<Interval> eps(K);
  bool bins_finite = true;
  for (int j = 0; j < K; ++j) {
    eps[j] = cert.bins[j].eps;
    if (!(cert.bins[j].B2.hi() < 1) || !(cert.bins[j].theta.hi() < 1)) bins_finite = false;
  }
  if (!bins_finite) {
    cert.checks.push_back(status_check("omega table computable", false));
    return cert;
  }
  parallel_for(K, [&](int j) { profiles[j] = linf_omega_profile(cert.bins[j].B2, 2, cutoff); });
  for (const auto& pr : profiles) cert.solver_nodes += pr.nodes;
  cert.omega_table.rows = combine_rows(profiles, eps, cutoff);
  cert.omega_table.tail_slope = h(cert.bins.back().B2) + cert.eps_sup / (num(2) * sqrt(num(cutoff)));
  add_table_checks(cert, s.ref_table, cfg.table_slack, "initial stage");

  ElementarySource e2 = exact_source(in.window_primes, 2, s.exact_ej_max);
  ElementarySource e3 = exact_source(in.window_primes, 3, s.exact_ej_max);
  cert.update2 = update_bias(s.beta2, f, cert.omega_table, e2, 2);
  cert.update3 = update_bias(s.beta3, f, cert.omega_table, e3, 3);
  cert.checks.push_back(make_check("beta_2(2) <= " + lit(s.beta2_next), cert.update2.beta, "<=", s.beta2_next));
  cert.checks.push_back(make_check("beta_3(2) <= " + lit(s.beta3_next), cert.update3.beta, "<=", s.beta3_next));
  return cert;
}

StageCertificate run_stage_asymptotic(const Config& cfg) {
  const AsymptoticConfig& a = cfg.asym;
  const Interval f = cfg.pi_good_floor;
  const Interval keep = one() - f;
  StageCertificate cert;
  cert.name = "uniform stage i >= 2";

  lll::ExpectationInputs ein = lll::inputs_uniform(a.P, a.prod, a.c2, a.c3, a.b2, a.b3);
  cert.expectations = lll::expectation_bounds(ein, a.M);
  const lll::ExpectationBounds& E = cert.expectations;
  cert.checks.push_back(make_check("E ||G(0)||_3^3 <= " + lit(a.EG3), E.EG3, "<=", a.EG3));
  cert.checks.push_back(make_check("E ||G(0)||_2^2 <= " + lit(a.EG2), E.EG2, "<=", a.EG2));
  cert.checks.push_back(make_check("E B_op(M)^2 <= " + lit(a.EBop2), E.EBop2, "<=", a.EBop2));
  cert.checks.push_back(make_check("E B_op(M)^2 with bracket 1 + 1/P <= " + lit(a.EBop2), E.EBop2_coarse, "<=",
                                   a.EBop2, false));
  cert.checks.push_back(make_check("curly C <= " + lit(a.ref_curly_c), E.curly_c, "<=", a.ref_curly_c, false));
  cert.checks.push_back(make_check("E curly S <= " + lit(a.ref_ES), E.ES, "<=", a.ref_ES, false));
  cert.checks.push_back(make_check("E curly S with bracket 1 + 1/P <= " + lit(a.ref_ES), E.ES_coarse, "<=", a.ref_ES,
                                   false));

  cert.markov_total = a.split3 * E.EG3 / a.EG3 + a.split2 * E.EG2 / a.EG2 + a.split_op * E.EBop2 / a.EBop2;
  cert.checks.push_back(
      make_check("Markov total C_3 E||G||_3^3 + C_2 E||G||_2^2 + C_op E B_op^2 <= 1", cert.markov_total, "<=", one()));
  cert.pi_good = one() - keep * cert.markov_total;
  cert.checks.push_back(make_check("pi_good >= " + lit(f), cert.pi_good, ">=", f));

  cert.cap3 = a.EG3 / (a.split3 * keep);
  cert.cap2 = a.EG2 / (a.split2 * keep);
  cert.cap_op = a.EBop2 / (a.split_op * keep);
  Interval b3max = cbrt(cert.cap3);
  cert.checks.push_back(near_check("cap on ||G||_3^3 matches " + lit(a.ref_cap3), cert.cap3, a.ref_cap3, cfg.cap_slack));
  cert.checks.push_back(near_check("cap on ||G||_3 matches " + lit(a.ref_B3max), b3max, a.ref_B3max, cfg.cap_slack));
  cert.checks.push_back(near_check("cap on ||G||_2^2 matches " + lit(a.ref_cap2), cert.cap2, a.ref_cap2, cfg.cap_slack));

  const int K = a.K;
  const int off = a.bin_offset;
  const Interval KK = num(K);
  std::vector<Interval> B3(K + 1), B2(K + 1);
  for (int i = 1; i <= K; ++i) B3[i] = cbrt(num(i) / KK * cert.cap3);
  for (int j = 1; j <= K; ++j) B2[j] = sqrt(num(j) / KK * cert.cap2);
  std::vector<Interval> eps_i(K + 1, Interval(0.0));
  bool finite = true;
  for (int i = 1; i <= K; ++i) {
    for (int j = 1; j <= K && i + j <= K + off; ++j) {
      Interval bop = sqrt(num(K + off - i - j) / KK * cert.cap_op);
      Bin bin = make_bin(i, j, B3[i], B2[j], bop, B3[i], a.M);
      if (!(bin.theta.hi() < 1) || !(bin.B_inf.hi() < 1)) finite = false;
      eps_i[i] = max(eps_i[i], bin.eps);
      cert.bins.push_back(bin);
    }
  }
  if (cert.bins.empty()) throw DomainError("no bins for this K and offset");
  add_bin_checks(cert, a.M, lit(a.M));
  cert.checks.push_back(make_check("max eps <= " + lit(a.ref_eps), cert.eps_sup, "<=", a.ref_eps, false));
  if (!finite) {
    cert.checks.push_back(status_check("omega table computable", false));
    return cert;
  }

  std::vector<int> rows_i;
  for (int i = 1; i <= K; ++i) {
    if (i + 1 <= K + off) rows_i.push_back(i);
  }
  const int cutoff = a.omega_cutoff;
  std::vector<LinfProfile> profiles(rows_i.size());
  std::vector<Interval> eps(rows_i.size());
  for (std::size_t t = 0; t < rows_i.size(); ++t) eps[t] = eps_i[rows_i[t]];
  parallel_for(static_cast<int>(rows_i.size()),
               [&](int t) { profiles[t] = linf_omega_profile(B3[rows_i[t]], 3, cutoff); });
  for (const auto& pr : profiles) cert.solver_nodes += pr.nodes;
  cert.omega_table.rows = combine_rows(profiles, eps, cutoff);
  cert.omega_table.tail_slope = h(B3[rows_i.back()]) + cert.eps_sup / (num(2) * sqrt(num(cutoff)));
  add_table_checks(cert, a.ref_table, cfg.table_slack, "uniform stage");

  Interval log_growth = log(a.growth);
  Interval tau2_bound = num(3) * log_growth + a.tau2_excess;
  Interval tau3_bound = num(7) * log_growth + a.tau3_excess;
  cert.checks.push_back(make_check("3 log " + lit(a.growth) + " + " + lit(a.tau2_excess) + " < " + lit(a.e1_tau2),
                                   tau2_bound, "<", a.e1_tau2));
  cert.checks.push_back(make_check("7 log " + lit(a.growth) + " + " + lit(a.tau3_excess) + " < " + lit(a.e1_tau3),
                                   tau3_bound, "<", a.e1_tau3));
  ElementarySource e2{{one()}, a.e1_tau2};
  ElementarySource e3{{one()}, a.e1_tau3};
  cert.update2 = update_bias(one(), f, cert.omega_table, e2, 2);
  cert.update3 = update_bias(one(), f, cert.omega_table, e3, 3);
  cert.checks.push_back(
      make_check("beta_2^2 ratio < " + lit(a.ref_ratio2), cert.update2.moment, "<", a.ref_ratio2, false));
  cert.checks.push_back(
      make_check("beta_3^3 ratio < " + lit(a.ref_ratio3), cert.update3.moment, "<", a.ref_ratio3, false));
  return cert;
}

InductionResult induction_check(const Config& cfg, const Interval& beta2_next, const Interval& beta3_next,
                                const Interval& ratio2, const Interval& ratio3) {
  const AsymptoticConfig& a = cfg.asym;
  InductionResult r;
  Interval g = a.growth;
  Interval gain2 = g * power_of(a.P, g - one());
  Interval gain3 = g * power_of(a.P, num(2) * (g - one()));
  r.checks.push_back(make_check("beta_2^2 ratio < " + lit(a.closure2), ratio2, "<", a.closure2));
  r.checks.push_back(make_check(lit(a.closure2) + " <= " + lit(g) + " P^(" + lit(g) + "-1)", a.closure2, "<=", gain2));
  r.checks.push_back(make_check("beta_3^3 ratio < " + lit(a.closure3), ratio3, "<", a.closure3));
  r.checks.push_back(
      make_check(lit(a.closure3) + " <= " + lit(g) + " P^(2(" + lit(g) + "-1))", a.closure3, "<=", gain3));
  Interval logP = log(a.P);
  Interval base2 = a.b2 * sqrt(a.P * logP);
  Interval base3 = a.b3 * cbrt(num(2) * a.P * a.P * logP);
  r.checks.push_back(make_check("base case beta_2(2) <= " + lit(a.b2) + " (P log P)^(1/2)", beta2_next, "<=", base2));
  r.checks.push_back(
      make_check("base case beta_3(2) <= " + lit(a.b3) + " (2 P^2 log P)^(1/3)", beta3_next, "<=", base3));
  return r;
}

ProofResult run_proof(const Config& cfg, const primes::SieveOptions& opts, const Progress& progress) {
  ProofResult r;
  r.config = cfg;
  auto note = [&](const std::string& m) {
    if (progress) progress(m);
  };
  auto t0 = std::chrono::steady_clock::now();
  note("initial stage inputs");
  r.stage1_in = stage1_inputs(cfg.stage1, opts);
  r.timings.emplace_back("initial stage inputs", seconds_since(t0));

  t0 = std::chrono::steady_clock::now();
  note("initial stage");
  r.stage1 = run_stage1(cfg, r.stage1_in);
  r.timings.emplace_back("initial stage", seconds_since(t0));

  t0 = std::chrono::steady_clock::now();
  note("uniform stage");
  r.asym = run_stage_asymptotic(cfg);
  r.timings.emplace_back("uniform stage", seconds_since(t0));

  r.induction = induction_check(cfg, cfg.stage1.beta2_next, cfg.stage1.beta3_next, r.asym.update2.moment,
                                r.asym.update3.moment);

  if (cfg.check_windows) {
    for (int i = 2; i <= 3; ++i) {
      t0 = std::chrono::steady_clock::now();
      note("window " + std::to_string(i));
      primes::PrimeWindow w = primes::window(i, opts);
      primes::WindowStats st = primes::stats_of(w.primes);
      st.stage = i;
      st.lo = w.lo;
      st.hi = w.hi;
      st.checks = primes::uniform_bound_checks(i, st);
      for (const Check& c : st.checks) r.window_checks.push_back(c);
      r.windows.push_back(std::move(st));
      r.timings.emplace_back("window " + std::to_string(i), seconds_since(t0));
    }
  }
  std::vector<Check> all = all_checks(r);
  const Check* bad = first_essential_failure(all);
  r.proved = bad == nullptr;
  if (bad) r.failure = bad->name;
  return r;
}

std::vector<Check> all_checks(const ProofResult& r) {
  std::vector<Check> out;
  for (const auto* v : {&r.stage1.checks, &r.asym.checks, &r.induction.checks, &r.window_checks}) {
    out.insert(out.end(), v->begin(), v->end());
  }
  return out;
}

}  // namespace coverify::stages
