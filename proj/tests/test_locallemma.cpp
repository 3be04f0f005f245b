#include <doctest.h>

#include <cmath>
#include <functional>

#include "coverify/config.hpp"
#include "coverify/locallemma.hpp"
#include "coverify/primes.hpp"
#include "harness.hpp"

using namespace coverify;
using namespace coverify::lll;

namespace {

/// Sum of |a_n|/n over moduli divisible by every prime in `ps`.
mpq_class weight_of(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& moduli,
                    const std::vector<std::uint64_t>& ps) {
  mpq_class w = 0;
  for (auto [n, c] : moduli) {
    bool all = true;
    for (auto p : ps) all = all && n % p == 0;
    if (all) w += harness::frac(c, n);
  }
  return w;
}

/// S_k from ordered tuples: for k = 1 the pairs (p, p1) with p != p1; for
/// k >= 2 every p and every ordered tuple of k distinct primes.
mpq_class s_k_brute(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& moduli,
                    const std::vector<std::uint64_t>& primes, int k) {
  mpq_class total = 0;
  std::vector<std::uint64_t> tuple;
  std::function<void()> rec = [&]() {
    if (static_cast<int>(tuple.size()) == k) {
      for (auto p : primes) {
        if (k == 1 && p == tuple[0]) continue;
        std::vector<std::uint64_t> set = tuple;
        set.push_back(p);
        mpq_class w = weight_of(moduli, set);
        total += w * w;
      }
      return;
    }
    for (auto q : primes) {
      if (std::find(tuple.begin(), tuple.end(), q) != tuple.end()) continue;
      tuple.push_back(q);
      rec();
      tuple.pop_back();
    }
  };
  rec();
  return total;
}

const std::vector<std::pair<std::uint64_t, std::uint64_t>> kSmall{
    {35, 1}, {55, 1}, {1001, 2}, {385, 1}, {221, 1}, {5 * 7 * 11 * 13, 3}, {17, 1}};

}  // namespace

TEST_CASE("sieve instances merge repeated moduli") {
  auto inst = SieveInstance::from_counts({{35, 1}, {35, 2}, {11, 1}});
  REQUIRE(inst.moduli().size() == 2);
  CHECK(inst.primes() == std::vector<std::uint64_t>{5, 7, 11});
  CHECK(inst.max_omega() == 2);
  CHECK(inst.index_of(7) == 1);
  auto sys = oracle::parse_system("1,2 mod 35\n2 mod 35\n0 mod 11\n");
  auto from_sys = SieveInstance::from_system(sys);
  CHECK(from_sys.moduli()[1].count == 2);
  CHECK_THROWS_AS(SieveInstance::from_counts({{1, 1}}), ValidationError);
  CHECK_THROWS_AS(SieveInstance::from_counts({{5, 6}}), ValidationError);
}

TEST_CASE("G vector by hand") {
  auto inst = SieveInstance::from_counts({{35, 1}, {5, 1}});
  Weights x{Interval(0.5), Interval(0.25)};
  auto g = g_vector(inst, x);
  mpq_class g5 = mpq_class(1, 35) * mpq_class(3, 2) * mpq_class(5, 4) + mpq_class(1, 5) * mpq_class(3, 2);
  mpq_class g7 = mpq_class(1, 35) * mpq_class(3, 2) * mpq_class(5, 4);
  CHECK(g[0].contains(g5));
  CHECK(g[1].contains(g7));
  CHECK(check_weights(inst, x));
  CHECK_FALSE(check_weights(inst, Weights{Interval(0.0), Interval(0.0)}));
}

TEST_CASE("S_k matches ordered-tuple enumeration") {
  auto inst = SieveInstance::from_counts(kSmall);
  auto s = s_k_bound(inst);
  REQUIRE(static_cast<int>(s.size()) == inst.max_omega());
  for (int k = 1; k <= inst.max_omega(); ++k) {
    mpq_class brute = s_k_brute(kSmall, inst.primes(), k);
    CHECK_MESSAGE(s[k - 1].contains(brute), "k = " << k);
  }
}

TEST_CASE("curly-C against direct summation") {
  Interval M(2.9), L = Interval(4000.0) * log(Interval(4000.0));
  SeriesSum c = curly_c(M, L);
  long double m = 2.9L, l = 4000.0L * std::log(4000.0L), sum = 1.0L / l, fact = 1.0L;
  for (int k = 2; k < 80; ++k) {
    fact *= (k - 1);
    sum += std::sqrt(static_cast<long double>(k)) * std::pow(m, k - 1) / (fact * std::pow(std::sqrt(l), k));
  }
  CHECK(c.value.lo() <= static_cast<double>(sum) * (1 + 1e-14));
  CHECK(c.value.hi() >= static_cast<double>(sum) * (1 - 1e-14));
  CHECK(c.value.width() < 1e-15);
}

TEST_CASE("split operator bound dominates the direct bound") {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> big{
      {227 * 229, 1}, {227, 1}, {229ull * 233 * 239, 2}, {241ull * 251, 3}, {233ull * 241 * 251, 1}};
  auto inst = SieveInstance::from_counts(big);
  Interval M(1.0), P(222.0);
  BopSplit split = b_op_bound(inst, M, P);
  Interval direct = b_op_direct(s_k_bound(inst), M);
  CHECK(square(direct).hi() <= split.bop_sq.hi());
  CHECK_THROWS_AS(b_op_bound(SieveInstance::from_counts({{35, 1}}), M, P), DomainError);
}

TEST_CASE("fixed point certificate on a sparse instance") {
  auto inst = SieveInstance::from_counts(kSmall);
  auto cert = newton_fixed_point(inst, Interval(1.0));
  CHECK(cert.condition_ok);
  REQUIRE(cert.has_fixed_point);
  Weights x(cert.x_verified.begin(), cert.x_verified.end());
  CHECK(check_weights(inst, x));
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(cert.x0[i].lo() <= x[i].hi());
    CHECK(cert.x_fix[i].contains(cert.x0[i].lo()));
  }
  Interval lower = density_lower_bound(inst, x);
  CHECK(lower.certainly_positive());
  CHECK(lower.hi() < 1.0);
  Interval b = bias_upper_bound(inst, x, 35);
  CHECK(b.lo() >= 1.0 / 35);
  CHECK(bias_upper_bound(inst, x, 3) == Interval(1.0) / Interval(3.0));
  CHECK_THROWS_AS(density_lower_bound(inst, Weights(x.size(), Interval(0.0))), PreconditionError);
}

TEST_CASE("closed-form certificate without iteration") {
  auto inst = SieveInstance::from_counts(kSmall);
  NewtonOptions opts;
  opts.iterate = false;
  auto cert = newton_fixed_point(inst, Interval(1.0), opts);
  CHECK_FALSE(cert.has_fixed_point);
  CHECK(cert.theta.hi() < 1.0);
  Interval expect = cert.B_20 / (Interval(1.0) - cert.theta);
  CHECK(cert.condition.intersects(expect));
}

TEST_CASE("fixed point preconditions") {
  CHECK_THROWS_AS(newton_fixed_point(SieveInstance::from_counts({{5, 5}}), Interval(1.0)), PreconditionError);
}

TEST_CASE("initial-stage expectation bounds") {
  Config cfg = default_config();
  auto w = primes::window_stats(1);
  auto in = inputs_from_window(w, Interval(222.0), Interval::decimal("12.25"), Interval::decimal("25"));
  auto e = expectation_bounds(in, cfg.stage1.M);
  CHECK(e.EG2.certainly_le(Interval::decimal("0.246514091")));
  CHECK(e.EG2.lo() > 0.2465);
  CHECK(e.EBop2.certainly_le(Interval::decimal("0.002220166")));
  CHECK(e.EBop2_coarse.certainly_le(Interval::decimal("0.002220166")));
  CHECK(e.EBop2_coarse.lo() > 0.0022201659);
  CHECK(e.EBop2.hi() <= e.EBop2_coarse.hi());
}

TEST_CASE("uniform-stage expectation bounds") {
  Config cfg = default_config();
  const auto& a = cfg.asym;
  auto in = inputs_uniform(a.P, a.prod, a.c2, a.c3, a.b2, a.b3);
  auto e = expectation_bounds(in, a.M);
  CHECK(e.EG3.certainly_le(Interval::decimal("0.1023637064")));
  CHECK(e.EG2.certainly_le(Interval::decimal("0.6144485964")));
  CHECK(e.curly_c.certainly_le(Interval::decimal("0.0001571422884")));
  CHECK(e.ES.certainly_le(Interval::decimal("3.212501212")));
  CHECK(e.EBop2.certainly_le(Interval::decimal("0.0005048197920")));
}
