#include "coverify/oracle.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <set>
#include <sstream>

namespace coverify::oracle {

namespace {

using u64 = std::uint64_t;
__extension__ typedef unsigned __int128 u128;
__extension__ typedef __int128 i128;

std::string trim(std::string_view s) {
  size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return std::string(s.substr(a, b - a));
}

u64 parse_uint(const std::string& tok, int line, const char* what) {
  std::string t = trim(tok);
  if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ParseError("line " + std::to_string(line) + ": bad " + what + " '" + t + "'");
  }
  try {
    return std::stoull(t);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line) + ": " + what + " out of range '" + t + "'");
  }
}

class Bitset {
 public:
  explicit Bitset(u64 n) : n_(n), words_((n + 63) / 64, 0) {}
  void clear() { std::fill(words_.begin(), words_.end(), 0); }
  void set(u64 i) { words_[i >> 6] |= u64(1) << (i & 63); }
  bool test(u64 i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  u64 count() const {
    u64 c = 0;
    for (u64 w : words_) c += static_cast<u64>(std::popcount(w));
    return c;
  }
  u64 size() const { return n_; }

 private:
  u64 n_;
  std::vector<u64> words_;
};

// Covered residues mod q (q a multiple of every modulus).
Bitset covered_set(const CongruenceSystem& system, u64 q) {
  Bitset bits(q);
  for (const Congruence& c : system.entries) {
    for (u64 r : c.residues) {
      for (u64 x = r; x < q; x += c.modulus) bits.set(x);
    }
  }
  return bits;
}

u64 checked_period(const CongruenceSystem& system, u64 extra, const OracleOptions& opts) {
  u64 q = lcm64(system.lcm(), extra);
  if (q > opts.budget) {
    throw ResourceError("period " + std::to_string(q) + " exceeds the oracle budget of " +
                        std::to_string(opts.budget) + " residues");
  }
  return q;
}

}  // namespace

u64 gcd64(u64 a, u64 b) {
  while (b) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u64 lcm64(u64 a, u64 b) {
  if (a == 0 || b == 0) return 0;
  u128 l = u128(a / gcd64(a, b)) * b;
  if (l > u128(UINT64_MAX)) throw ResourceError("lcm of moduli overflows 64 bits");
  return static_cast<u64>(l);
}

u64 inverse_mod(u64 a, u64 m) {
  if (m == 1) return 0;
  i128 t = 0, newt = 1, r = m, newr = a % m;
  while (newr != 0) {
    i128 q = r / newr;
    i128 tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (r != 1) throw DomainError("no inverse: arguments not coprime");
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

bool CongruenceSystem::distinct() const {
  std::set<u64> seen;
  for (const Congruence& c : entries) {
    if (c.residues.size() > 1 || !seen.insert(c.modulus).second) return false;
  }
  return true;
}

u64 CongruenceSystem::lcm() const {
  u64 l = 1;
  for (const Congruence& c : entries) l = lcm64(l, c.modulus);
  return l;
}

CongruenceSystem parse_system(std::string_view text) {
  CongruenceSystem sys;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw.substr(0, raw.find('#'));
    s = trim(s);
    if (s.empty()) continue;
    auto pos = s.find(" mod ");
    if (pos == std::string::npos) throw ParseError("line " + std::to_string(line) + ": expected 'r1,r2,... mod m'");
    std::string lhs = s.substr(0, pos);
    std::string rhs = s.substr(pos + 5);
    Congruence c;
    c.modulus = parse_uint(rhs, line, "modulus");
    std::stringstream parts(lhs);
    std::string tok;
    while (std::getline(parts, tok, ',')) c.residues.push_back(parse_uint(tok, line, "residue"));
    if (c.residues.empty()) throw ParseError("line " + std::to_string(line) + ": no residues");
    if (c.modulus <= 1) throw ValidationError("line " + std::to_string(line) + ": modulus must exceed 1");
    for (u64 r : c.residues) {
      if (r >= c.modulus) {
        throw ValidationError("line " + std::to_string(line) + ": residue " + std::to_string(r) +
                              " not reduced mod " + std::to_string(c.modulus));
      }
    }
    std::sort(c.residues.begin(), c.residues.end());
    c.residues.erase(std::unique(c.residues.begin(), c.residues.end()), c.residues.end());
    sys.entries.push_back(std::move(c));
  }
  return sys;
}

CongruenceSystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read system file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str());
}

std::string serialize(const CongruenceSystem& system) {
  std::string out;
  for (const Congruence& c : system.entries) {
    for (size_t i = 0; i < c.residues.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(c.residues[i]);
    }
    out += " mod " + std::to_string(c.modulus) + "\n";
  }
  return out;
}

CongruenceSystem normalize(CongruenceSystem system) {
  for (Congruence& c : system.entries) {
    std::sort(c.residues.begin(), c.residues.end());
    c.residues.erase(std::unique(c.residues.begin(), c.residues.end()), c.residues.end());
  }
  std::sort(system.entries.begin(), system.entries.end(), [](const Congruence& a, const Congruence& b) {
    return a.modulus != b.modulus ? a.modulus < b.modulus : a.residues < b.residues;
  });
  return system;
}

u64 uncovered_count_direct(const CongruenceSystem& system) {
  u64 q = system.lcm();
  return q - covered_set(system, q).count();
}

u64 fiber_split(u64 q, u64 limit) {
  // Factor q into prime powers and move the largest ones into B while B <= limit.
  std::vector<u64> powers;
  u64 rest = q;
  for (u64 p = 2; p * p <= rest; ++p) {
    if (rest % p) continue;
    u64 pk = 1;
    while (rest % p == 0) {
      rest /= p;
      pk *= p;
    }
    powers.push_back(pk);
  }
  if (rest > 1) powers.push_back(rest);
  std::sort(powers.rbegin(), powers.rend());
  u64 b = 1;
  for (u64 pk : powers) {
    if (u128(b) * pk <= limit) b *= pk;
  }
  return q / b;
}

u64 uncovered_count_fibered(const CongruenceSystem& system, u64 a) {
  u64 q = system.lcm();
  if (a == 0 || q % a != 0) throw DomainError("fiber modulus must divide the period");
  u64 b = q / a;
  if (gcd64(a, b) != 1) throw DomainError("fiber modulus must be coprime to its cofactor");
  struct Prepared {
    u64 ma, mb, inv;
    const std::vector<u64>* residues;
  };
  std::vector<Prepared> prep;
  for (const Congruence& c : system.entries) {
    u64 ma = gcd64(c.modulus, a);
    u64 mb = c.modulus / ma;
    prep.push_back({ma, mb, inverse_mod(a % mb, mb), &c.residues});
  }
  Bitset bits(b);
  u64 uncovered = 0;
  for (u64 r = 0; r < a; ++r) {
    bits.clear();
    for (const Prepared& p : prep) {
      for (u64 res : *p.residues) {
        if (r % p.ma != res % p.ma) continue;
        u64 diff = ((res % p.mb) + p.mb - (r % p.mb)) % p.mb;
        u64 t0 = static_cast<u64>(u128(diff) * p.inv % p.mb);
        for (u64 t = t0; t < b; t += p.mb) bits.set(t);
      }
    }
    uncovered += b - bits.count();
  }
  return uncovered;
}

mpq_class uncovered_density(const CongruenceSystem& system, const OracleOptions& opts) {
  u64 q = checked_period(system, 1, opts);
  u64 count = 0;
  if (q <= opts.bitset_limit) {
    count = uncovered_count_direct(system);
  } else {
    count = uncovered_count_fibered(system, fiber_split(q, opts.bitset_limit));
  }
  mpq_class d(mpz_class(std::to_string(count), 10), mpz_class(std::to_string(q), 10));
  d.canonicalize();
  return d;
}

bool covers(const CongruenceSystem& system, const OracleOptions& opts) {
  return uncovered_density(system, opts) == 0;
}

std::map<u64, std::vector<u64>> fiber_decompose(const CongruenceSystem& system, u64 r, u64 qi) {
  if (qi == 0) throw DomainError("Q_i must be positive");
  if (r >= qi) throw DomainError("r must be reduced mod Q_i");
  std::map<u64, std::set<u64>> acc;
  for (const Congruence& c : system.entries) {
    u64 m0 = 1, n = c.modulus;
    for (u64 g = gcd64(n, qi); g > 1; g = gcd64(n, qi)) {
      m0 *= g;
      n /= g;
    }
    if (qi % m0 != 0) {
      throw DecompositionError("modulus " + std::to_string(c.modulus) + " has a part " + std::to_string(m0) +
                               " on the primes of Q_i that does not divide Q_i");
    }
    u64 inv = inverse_mod(qi % n, n);
    for (u64 a : c.residues) {
      if (r % m0 != a % m0) continue;
      u64 diff = ((a % n) + n - (r % n)) % n;
      acc[n].insert(static_cast<u64>(u128(diff) * inv % n));
    }
  }
  std::map<u64, std::vector<u64>> out;
  for (auto& [n, s] : acc) out[n] = std::vector<u64>(s.begin(), s.end());
  return out;
}

mpq_class fiber_density(const std::map<u64, std::vector<u64>>& fiber, const OracleOptions& opts) {
  CongruenceSystem sub;
  for (const auto& [n, residues] : fiber) {
    if (n == 1) return mpq_class(0);
    sub.entries.push_back(Congruence{n, residues});
  }
  return uncovered_density(sub, opts);
}

mpq_class max_bias(const CongruenceSystem& system, u64 n, const OracleOptions& opts) {
  if (n == 0) throw DomainError("bias modulus must be positive");
  u64 q = checked_period(system, n, opts);
  Bitset cov = covered_set(system, q);
  std::vector<u64> counts(n, 0);
  u64 total = 0;
  for (u64 x = 0; x < q; ++x) {
    if (!cov.test(x)) {
      ++counts[x % n];
      ++total;
    }
  }
  if (total == 0) throw EmptyFiberError("uncovered set is empty");
  u64 best = *std::max_element(counts.begin(), counts.end());
  mpq_class v(mpz_class(std::to_string(best), 10) * mpz_class(std::to_string(n), 10), mpz_class(std::to_string(total), 10));
  v.canonicalize();
  return v;
}

mpq_class empirical_bias(const CongruenceSystem& system, u64 n, u64 b, const OracleOptions& opts) {
  if (n == 0) throw DomainError("bias modulus must be positive");
  u64 q = checked_period(system, n, opts);
  Bitset cov = covered_set(system, q);
  u64 in_class = 0, total = 0;
  for (u64 x = 0; x < q; ++x) {
    if (cov.test(x)) continue;
    ++total;
    if (x % n == b % n) ++in_class;
  }
  if (total == 0) throw EmptyFiberError("uncovered set is empty");
  mpq_class v(mpz_class(std::to_string(in_class), 10) * mpz_class(std::to_string(n), 10), mpz_class(std::to_string(total), 10));
  v.canonicalize();
  return v;
}

mpq_class fibered_max_bias(const CongruenceSystem& system, u64 qi, u64 n, const OracleOptions& opts) {
  if (n == 0 || qi == 0) throw DomainError("moduli must be positive");
  u64 q = checked_period(system, lcm64(qi, n), opts);
  if (u128(qi) * n > opts.budget) throw ResourceError("fiber table too large");
  Bitset cov = covered_set(system, q);
  std::vector<u64> counts(qi * n, 0);
  std::vector<u64> fiber_total(qi, 0);
  for (u64 x = 0; x < q; ++x) {
    if (cov.test(x)) continue;
    ++counts[(x % qi) * n + x % n];
    ++fiber_total[x % qi];
  }
  mpq_class best = -1;
  for (u64 r = 0; r < qi; ++r) {
    if (fiber_total[r] == 0) continue;
    for (u64 b = 0; b < n; ++b) {
      mpq_class v(mpz_class(std::to_string(counts[r * n + b]), 10) * mpz_class(std::to_string(n), 10),
                  mpz_class(std::to_string(fiber_total[r]), 10));
      v.canonicalize();
      if (v > best) best = v;
    }
  }
  if (best < 0) throw EmptyFiberError("every fiber is empty");
  return best;
}

}  // namespace coverify::oracle
