#include <doctest.h>

#include "coverify/primes.hpp"
#include "coverify/shearer.hpp"
#include "coverify/symfunc.hpp"
#include "harness.hpp"

using namespace coverify;
using namespace coverify::shearer;

TEST_CASE("prime list for the chain") {
  auto ps = primes_between_4_and(222);
  CHECK(ps.size() == 45);
  CHECK(ps.front() == 5);
  CHECK(ps.back() == 211);
}

TEST_CASE("chain holds through 619 and breaks at 631") {
  auto through = verify_chain(primes_between_4_and(631));
  CHECK(through.primes.back() == 619);
  CHECK(through.holds);
  auto with631 = verify_chain(primes_between_4_and(632));
  CHECK_FALSE(with631.holds);
  CHECK(with631.fail_prime == 631);
  auto with641 = verify_chain(primes_between_4_and(642));
  CHECK_FALSE(with641.holds);
  CHECK(with641.fail_prime == 631);
}

TEST_CASE("initial chain and bias statistics") {
  auto chain = verify_chain(primes_between_4_and(222));
  REQUIRE(chain.holds);
  CHECK(chain.rho_chain.back().certainly_positive());
  auto b2 = bias_stat_stage1(2, chain.primes);
  auto b3 = bias_stat_stage1(3, chain.primes);
  CHECK(b2.beta.certainly_le(Interval::decimal("12.25")));
  CHECK(b3.beta.certainly_le(Interval::decimal("25")));
  CHECK(b2.beta.lo() > 12.2);
  CHECK(b3.beta.lo() > 24.9);
}

TEST_CASE("chain rejects bad prime lists") {
  CHECK_THROWS_AS(verify_chain({3, 5}), DomainError);
  CHECK_THROWS_AS(verify_chain({7, 5}), DomainError);
}

TEST_CASE("mixed-table subset sum against direct subset enumeration") {
  std::vector<std::uint64_t> ps{5, 7, 11, 13, 17, 19, 23, 29};
  std::vector<Interval> pi, tau;
  std::vector<mpq_class> pi_q;
  for (auto p : ps) {
    pi_q.emplace_back(1, static_cast<long>(p - 1));
    pi.push_back(Interval::rational(pi_q.back()));
    tau.push_back(primes::tau_k(p, 2));
  }
  Interval brute(0.0);
  std::size_t n = ps.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    std::vector<mpq_class> rest;
    Interval prod(1.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) {
        prod *= tau[i];
      } else {
        rest.push_back(pi_q[i]);
      }
    }
    brute += Interval::rational(symfunc::rho_exact(rest, mpq_class(1))) * prod;
  }
  Interval fast = subset_tau_sum(pi, tau);
  CHECK(fast.intersects(brute));
  CHECK(fast.width() < 1e-10 * fast.hi());
}

TEST_CASE("progression bound for a single prime") {
  std::vector<std::uint64_t> ps{5, 7};
  Interval b = progression_bound(5, ps);
  mpq_class expected = mpq_class(1, 5) * (1 - mpq_class(1, 6)) / (1 - mpq_class(1, 4) - mpq_class(1, 6));
  CHECK(b.contains(expected));
}

TEST_CASE("Shearer bounds hold on random systems over 5, 7, 11") {
  auto st = harness::shearer_run(300, 99);
  CHECK(st.systems == 300);
  CHECK(st.comparisons > 1000);
  CHECK(st.density_violations == 0);
  CHECK(st.bias_violations == 0);
}
