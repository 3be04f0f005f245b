#include "coverify/shearer.hpp"

#include <algorithm>

#include "coverify/primes.hpp"
#include "coverify/symfunc.hpp"

namespace coverify::shearer {

namespace {

std::vector<mpq_class> exact_weights(const std::vector<std::uint64_t>& primes, std::size_t count) {
  std::vector<mpq_class> w;
  w.reserve(count);
  for (std::size_t i = 0; i < count; ++i) w.emplace_back(1, static_cast<unsigned long>(primes[i] - 1));
  return w;
}

void validate(const std::vector<std::uint64_t>& primes) {
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (primes[i] <= 3) throw DomainError("Shearer chains use primes above 3");
    if (i > 0 && primes[i] <= primes[i - 1]) throw DomainError("primes must be strictly ascending");
  }
}

}  // namespace

std::vector<Interval> shearer_weights(const std::vector<std::uint64_t>& primes) {
  std::vector<Interval> w;
  w.reserve(primes.size());
  for (std::uint64_t p : primes) w.push_back(Interval(1.0) / Interval(static_cast<double>(p - 1)));
  return w;
}

std::vector<std::uint64_t> primes_between_4_and(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 6) return out;
  for (std::uint32_t p : primes::sieve(limit - 1)) {
    if (p > 4) out.push_back(p);
  }
  return out;
}

ChainCertificate verify_chain(const std::vector<std::uint64_t>& primes, const ChainOptions& opts) {
  validate(primes);
  ChainCertificate cert;
  cert.primes = primes;
  int n = static_cast<int>(primes.size());
  std::vector<Interval> w = shearer_weights(primes);
  symfunc::XSequence x = symfunc::x_sequence(Interval(1.0), n);
  std::vector<Interval> e(n + 1, Interval(0.0));
  e[0] = Interval(1.0);
  const mpq_class one(1);

  auto fail = [&](int j, std::string reason) {
    cert.holds = false;
    cert.fail_index = j;
    cert.fail_prime = primes[j];
    cert.reason = std::move(reason);
    return cert;
  };

  for (int j = 0; j < n; ++j) {
    for (int i = j + 1; i >= 1; --i) e[i] = e[i] + e[i - 1] * w[j];
    Interval r(0.0);
    for (int i = 0; i <= j + 1; ++i) r = r + x.values[i] * e[i];
    cert.rho_chain.push_back(r);
    cert.exact_used.push_back(false);

    bool ordered = (j == 0) || cert.rho_chain[j - 1].certainly_ge(r);
    bool positive = r.certainly_positive();
    if (!(ordered && positive)) {
      if (!opts.exact_fallback) {
        bool ordering_refuted = j > 0 && cert.rho_chain[j - 1].certainly_lt(r);
        bool sign_refuted = r.hi() <= 0;
        if (ordering_refuted) return fail(j, "chain ordering breaks");
        if (sign_refuted) return fail(j, "rho is not positive");
        throw UndecidableOrdering("cannot order rho at prime " + std::to_string(primes[j]));
      }
      cert.exact_used[j] = true;
      mpq_class rj = symfunc::rho_exact(exact_weights(primes, j + 1), one);
      if (j > 0 && !ordered) {
        mpq_class rprev = symfunc::rho_exact(exact_weights(primes, j), one);
        if (rprev < rj) return fail(j, "chain ordering breaks");
      }
      if (!(rj > 0)) return fail(j, "rho is not positive");
    }
  }
  cert.holds = true;
  return cert;
}

Interval progression_bound(std::uint64_t m, const std::vector<std::uint64_t>& primes) {
  if (m == 0) throw DomainError("modulus must be positive");
  std::vector<bool> in_s(primes.size(), false);
  std::uint64_t rest = m;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (rest % primes[i] == 0) {
      in_s[i] = true;
      while (rest % primes[i] == 0) rest /= primes[i];
    }
  }
  if (rest != 1) throw DomainError("modulus " + std::to_string(m) + " has a prime factor outside the list");
  ChainCertificate chain = verify_chain(primes);
  if (!chain.holds) {
    throw PreconditionError("Shearer chain fails at prime " + std::to_string(chain.fail_prime));
  }
  std::vector<Interval> w = shearer_weights(primes);
  std::vector<Interval> rest_w;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!in_s[i]) rest_w.push_back(w[i]);
  }
  Interval ratio = symfunc::rho(rest_w, Interval(1.0)) / symfunc::rho(w, Interval(1.0));
  return ratio / Interval(static_cast<double>(m));
}

Interval subset_tau_sum(const std::vector<Interval>& pi, const std::vector<Interval>& tau) {
  int n = static_cast<int>(pi.size());
  symfunc::SymTable t = symfunc::mixed(pi, tau);
  symfunc::XSequence x = symfunc::x_sequence(Interval(1.0), n);
  Interval s(0.0);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; i + j <= n && j < static_cast<int>(t.f[i].size()); ++j) s = s + x.values[i] * t.f[i][j];
  }
  return s;
}

BiasStat bias_stat_stage1(int k, const std::vector<std::uint64_t>& primes) {
  if (k != 2 && k != 3) throw DomainError("bias statistics for k = 2, 3");
  ChainCertificate chain = verify_chain(primes);
  if (!chain.holds) {
    throw PreconditionError("Shearer chain fails at prime " + std::to_string(chain.fail_prime));
  }
  std::vector<Interval> pi = shearer_weights(primes);
  std::vector<Interval> tau;
  tau.reserve(primes.size());
  for (std::uint64_t p : primes) tau.push_back(primes::tau_k(p, k));
  BiasStat out;
  out.k = k;
  Interval rho_n = chain.rho_chain.empty() ? Interval(1.0) : chain.rho_chain.back();
  out.moment = subset_tau_sum(pi, tau) / rho_n;
  out.beta = (k == 2) ? sqrt(out.moment) : cbrt(out.moment);
  return out;
}

BiasStat bias_stat_stage1(int k) { return bias_stat_stage1(k, primes_between_4_and(222)); }

}  // namespace coverify::shearer
