#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "coverify/config.hpp"
#include "coverify/oracle.hpp"
#include "coverify/primes.hpp"
#include "coverify/shearer.hpp"
#include "coverify/stages.hpp"
#include "coverify/symfunc.hpp"
#include "harness.hpp"

using namespace coverify;

namespace {

// Tolerances and thresholds.
constexpr double kTableSlack = 1e-9;
constexpr double kCapRelative = 1e-9;
constexpr double kChainSeconds = 10;
constexpr double kStage1Seconds = 60;
constexpr double kUniformSeconds = 120;
constexpr double kWindowSeconds = 300;

Interval dec(const char* s) { return Interval::decimal(s); }

struct Criterion {
  int id;
  std::string title;
  std::vector<std::pair<bool, std::string>> items;
  std::vector<std::string> notes;
  void add(bool ok, std::string what) { items.emplace_back(ok, std::move(what)); }
  bool ok() const {
    for (const auto& [good, what] : items) {
      if (!good) return false;
    }
    return !items.empty();
  }
};

std::vector<Criterion> results;

void report(const Criterion& c) {
  std::printf("%s %d: %s\n", c.ok() ? "PASS" : "FAIL", c.id, c.title.c_str());
  for (const auto& [good, what] : c.items) std::printf("    [%s] %s\n", good ? " ok " : "FAIL", what.c_str());
  for (const auto& n : c.notes) std::printf("    info: %s\n", n.c_str());
  std::fflush(stdout);
  results.push_back(c);
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string show(const Interval& x) { return to_string(x); }

/// hi(x) <= target, every member certified.
void at_most(Criterion& c, const std::string& name, const Interval& x, const char* target) {
  Interval p = dec(target);
  c.add(x.hi() <= p.lo(), name + " " + show(x) + " <= " + target);
}

/// Enclosure lies within the relative band around the target value.
void near(Criterion& c, const std::string& name, const Interval& x, const char* target) {
  Interval p = dec(target);
  Interval band = p * Interval(1 - kCapRelative, 1 + kCapRelative);
  c.add(x.lo() >= band.lo() && x.hi() <= band.hi(), name + " " + show(x) + " within 1e-9 relative of " + target);
}

void table_rows(Criterion& c, const std::string& label, const std::vector<Interval>& rows,
                const std::vector<const char*>& target) {
  for (std::size_t w = 0; w < target.size(); ++w) {
    Interval bound = dec(target[w]) + Interval(kTableSlack);
    bool ok = w < rows.size() && rows[w].hi() <= bound.lo();
    c.add(ok, label + " row " + std::to_string(w + 1) + " " + (w < rows.size() ? show(rows[w]) : "missing") +
                  " <= " + target[w] + " + 1e-9");
  }
}

void timed(Criterion& c, double secs, double limit) {
  c.add(secs < limit, "runtime " + fmt(secs) + " s < " + fmt(limit) + " s");
}

}  // namespace

int main() {
  Config cfg = default_config();

  // 1. Shearer chain.
  {
    Criterion c{1, "Shearer chain through 631, break when 641 is appended", {}};
    auto t0 = std::chrono::steady_clock::now();
    auto initial = shearer::verify_chain(shearer::primes_between_4_and(222));
    c.add(initial.holds, "chain holds for the " + std::to_string(initial.primes.size()) + " primes in (4, 222)");
    auto to631 = shearer::verify_chain(shearer::primes_between_4_and(632));
    c.add(to631.holds, to631.holds ? "chain holds through 631"
                                   : "chain through 631 breaks at " + std::to_string(to631.fail_prime) + " (" +
                                         to631.reason + ")");
    auto to641 = shearer::verify_chain(shearer::primes_between_4_and(642));
    c.add(!to641.holds, "chain with 641 appended fails (first break at " + std::to_string(to641.fail_prime) + ")");
    timed(c, since(t0), kChainSeconds);
    report(c);
  }

  // 2. Bias statistics.
  auto b2 = shearer::bias_stat_stage1(2);
  auto b3 = shearer::bias_stat_stage1(3);
  {
    Criterion c{2, "initial bias statistics", {}};
    at_most(c, "beta_2(1)", b2.beta, "12.25");
    at_most(c, "beta_3(1)", b3.beta, "25");
    report(c);
  }

  // 3 and 4. Initial stage.
  auto t_stage1 = std::chrono::steady_clock::now();
  stages::Stage1Inputs in1 = stages::stage1_inputs(cfg.stage1);
  stages::StageCertificate s1 = stages::run_stage1(cfg, in1);
  double stage1_secs = since(t_stage1);
  {
    Criterion c{3, "initial-stage expectations and caps", {}};
    at_most(c, "E||G(0)||_2^2", s1.expectations.EG2, "0.246514091");
    at_most(c, "E B_op^2", s1.expectations.EBop2, "0.002220166");
    near(c, "cap on ||G||_2^2", s1.cap2, "0.391292208");
    near(c, "cap on ||G||_2", sqrt(s1.cap2), "0.625533539");
    report(c);
  }
  {
    Criterion c{4, "initial-stage bins, eps and omega table", {}};
    Interval M = dec("1.769746269");
    int passing = 0;
    std::string worst;
    double worst_hi = 0;
    for (const auto& b : s1.bins) {
      if (b.condition.hi() < M.lo()) ++passing;
      if (b.condition.hi() > worst_hi) {
        worst_hi = b.condition.hi();
        worst = "j=" + std::to_string(b.j) + " " + show(b.condition);
      }
    }
    c.add(s1.bins.size() == 100 && passing == 100,
          std::to_string(passing) + " of " + std::to_string(s1.bins.size()) +
              " bins with B_20/(1-theta) < 1.769746269 (largest " + worst + ")");
    at_most(c, "eps_sup", s1.eps_sup, "0.292129153");
    table_rows(c, "omega table", s1.omega_table.rows,
               {"1.769746269", "1.900670975", "2.033321919", "2.184489901", "2.363269323", "2.530235874",
                "2.686345986", "2.833661687", "2.973253326", "3.106051540"});
    timed(c, stage1_secs, kStage1Seconds);
    report(c);
  }

  // 5. Propagation to the second window.
  {
    Criterion c{5, "bias propagation and base case", {}};
    Interval p2 = dec("94.66051416"), p3 = dec("199.2834489");
    c.add(s1.update2.beta.hi() < p2.lo(), "beta_2(2) " + show(s1.update2.beta) + " < 94.66051416");
    c.add(s1.update3.beta.hi() < p3.lo(), "beta_3(2) " + show(s1.update3.beta) + " < 199.2834489");
    Interval base = dec("0.5197033883") * sqrt(Interval(4000.0) * log(Interval(4000.0)));
    c.add(p2.hi() <= base.lo(), "94.66051416 <= 0.5197033883 (4000 log 4000)^(1/2) = " + show(base));
    report(c);
  }

  // 6. Uniform stage.
  {
    Criterion c{6, "uniform stage constants, bins, table and induction", {}};
    auto t0 = std::chrono::steady_clock::now();
    stages::StageCertificate a = stages::run_stage_asymptotic(cfg);
    double secs = since(t0);
    const auto& e = a.expectations;
    at_most(c, "curly-C", e.curly_c, "0.0001571422884");
    at_most(c, "E curly-S", e.ES, "3.212501212");
    at_most(c, "E||G(0)||_3^3", e.EG3, "0.1023637064");
    at_most(c, "E||G(0)||_2^2", e.EG2, "0.6144485964");
    at_most(c, "E B_op^2", e.EBop2, "0.0005048197920");
    c.notes.push_back("E curly-S with the (1 + 1/P) bracket " + show(e.ES_coarse) + ", E B_op^2 with it " +
                      show(e.EBop2_coarse));
    Interval M = dec("2.949873427");
    int passing = 0;
    const stages::Bin* first_bad = nullptr;
    for (const auto& b : a.bins) {
      if (b.condition.hi() < M.lo()) {
        ++passing;
      } else if (!first_bad) {
        first_bad = &b;
      }
    }
    std::string detail = std::to_string(passing) + " of " + std::to_string(a.bins.size()) + " bins below M = 2.949873427";
    if (first_bad) {
      detail += "; fails at i=" + std::to_string(first_bad->i) + ", j=" + std::to_string(first_bad->j) + " with " +
                show(first_bad->condition);
    }
    c.add(first_bad == nullptr && !a.bins.empty(), detail);
    at_most(c, "eps_sup", a.eps_sup, "0.190000303");
    table_rows(c, "omega table", a.omega_table.rows,
               {"1.459164221", "1.780349459", "2.096937862", "2.387653719", "2.656941273", "2.909180305",
                "3.147611526", "3.374605257", "3.591932780", "3.800951606"});
    Interval ratio2 = a.update2.moment, ratio3 = a.update3.moment;
    c.add(ratio2.hi() < dec("48.515").lo(), "beta_2^2 ratio " + show(ratio2) + " < 48.515");
    c.add(ratio3.hi() < dec("487.17").lo(), "beta_3^3 ratio " + show(ratio3) + " < 487.17");
    auto ind = stages::induction_check(cfg, cfg.stage1.beta2_next, cfg.stage1.beta3_next, ratio2, ratio3);
    for (const auto& ch : ind.checks) c.add(ch.ok, "induction: " + ch.name + " " + show(ch.lhs) + " vs " + show(ch.rhs));
    timed(c, secs, kUniformSeconds);
    report(c);
  }

  // 7. Prime windows two and three.
  {
    Criterion c{7, "uniform window inequalities for windows 2 and 3", {}};
    auto t0 = std::chrono::steady_clock::now();
    primes::SieveOptions opts = primes::options_from_environment();
    for (int i = 2; i <= 3; ++i) {
      primes::PrimeWindow w = primes::window(i, opts);
      primes::WindowStats st = primes::stats_of(w.primes);
      st.stage = i;
      st.lo = w.lo;
      st.hi = w.hi;
      auto checks = primes::uniform_bound_checks(i, st);
      c.add(checks.size() == 5, "window " + std::to_string(i) + " [" + std::to_string(w.lo) + ", " +
                                    std::to_string(w.hi) + "): " + std::to_string(st.count) + " primes, " +
                                    std::to_string(checks.size()) + " inequalities");
      for (const auto& ch : checks) c.add(ch.ok, ch.name + " " + show(ch.lhs));
    }
    timed(c, since(t0), kWindowSeconds);
    report(c);
  }

  // 8. Oracle soundness.
  {
    Criterion c{8, "property suite against the exact oracle", {}};
    auto st = harness::soundness_run(300, 20240611);
    c.add(st.certified >= 200, std::to_string(st.certified) + " of " + std::to_string(st.systems) +
                                   " random systems coprime to 6 with certified weights (need >= 200)");
    c.add(st.density_violations == 0, std::to_string(st.density_violations) + " density violations in " +
                                          std::to_string(st.density_checks) + " comparisons");
    c.add(st.bias_violations == 0,
          std::to_string(st.bias_violations) + " bias violations in " + std::to_string(st.bias_checks) + " comparisons");
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> th(0.5, 2.0);
    int draws = 0, disagreements = 0;
    for (int t = 0; t < 200; ++t) {
      Interval theta(th(rng));
      int n = 1 + t % 4;
      std::uniform_real_distribution<double> wd(0.0, 0.95 / theta.hi());
      std::vector<Interval> w;
      for (int k = 0; k < n; ++k) w.emplace_back(wd(rng));
      ++draws;
      if (!symfunc::rho(w, theta).intersects(symfunc::brute_xi(w, theta))) ++disagreements;
    }
    c.add(draws >= 100 && disagreements == 0,
          "rho and the independent-set polynomial agree on " + std::to_string(draws - disagreements) + " of " +
              std::to_string(draws) + " draws with n <= 4");
    auto sh = harness::shearer_run(200, 99);
    c.add(sh.density_violations == 0 && sh.bias_violations == 0,
          "Shearer progression bound on " + std::to_string(sh.systems) + " systems over {5, 7, 11}: " +
              std::to_string(sh.bias_violations) + " violations in " + std::to_string(sh.comparisons) + " comparisons");
    report(c);
  }

  // 9. Known covering.
  {
    Criterion c{9, "classical covering modulo 12", {}};
    auto sys = oracle::parse_system("0 mod 2\n0 mod 3\n1 mod 4\n5 mod 6\n7 mod 12\n");
    mpq_class d = oracle::uncovered_density(sys);
    c.add(d == 0, "density of the full system " + d.get_str());
    for (std::size_t k = 0; k < sys.entries.size(); ++k) {
      oracle::CongruenceSystem less = sys;
      less.entries.erase(less.entries.begin() + static_cast<long>(k));
      mpq_class dk = oracle::uncovered_density(less);
      c.add(dk > 0, "without " + std::to_string(sys.entries[k].residues[0]) + " mod " +
                        std::to_string(sys.entries[k].modulus) + ": density " + dk.get_str());
    }
    report(c);
  }

  // 10. The overall result rests on everything above.
  {
    Criterion c{10, "certificate suite and property harness together", {}};
    for (const auto& r : results) c.add(r.ok(), "criterion " + std::to_string(r.id) + ": " + r.title);
    report(c);
  }

  int failed = 0;
  for (const auto& r : results) failed += r.ok() ? 0 : 1;
  std::printf("%d of %zu criteria pass\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? 0 : 1;
}
