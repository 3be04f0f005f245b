#include "coverify/primes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace coverify::primes {

namespace {

constexpr std::uint64_t kSegment = std::uint64_t(1) << 20;
constexpr std::uint64_t kMaxLimit = std::uint64_t(1) << 31;
constexpr char kMagic[8] = {'C', 'V', 'P', 'R', 'I', 'M', 'E', 'S'};
constexpr std::uint32_t kCacheVersion = 1;

std::vector<std::uint32_t> small_primes(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint32_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

std::vector<std::uint32_t> segmented(std::uint64_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit)));
  while (root * root > limit) --root;
  while ((root + 1) * (root + 1) <= limit) ++root;
  std::vector<std::uint32_t> base = small_primes(root);
  double estimate = 1.3 * static_cast<double>(limit) / std::log(static_cast<double>(limit) + 2.0) + 16;
  out.reserve(static_cast<std::size_t>(estimate));
  std::vector<std::uint8_t> seg(kSegment);
  for (std::uint64_t low = 0; low <= limit; low += kSegment) {
    std::uint64_t high = std::min(low + kSegment - 1, limit);
    std::fill(seg.begin(), seg.end(), 1);
    for (std::uint32_t p : base) {
      std::uint64_t pp = std::uint64_t(p) * p;
      if (pp > high) break;
      std::uint64_t start = std::max(pp, (low + p - 1) / p * p);
      for (std::uint64_t j = start; j <= high; j += p) seg[j - low] = 0;
    }
    for (std::uint64_t n = std::max<std::uint64_t>(low, 2); n <= high; ++n) {
      if (seg[n - low]) out.push_back(static_cast<std::uint32_t>(n));
    }
  }
  return out;
}

std::filesystem::path cache_path(const std::string& dir, std::uint64_t limit) {
  return std::filesystem::path(dir) / ("primes-v1-" + std::to_string(limit) + ".bin");
}

bool read_cache(const std::filesystem::path& path, std::uint64_t limit, std::vector<std::uint32_t>& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  char magic[8];
  std::uint32_t version = 0, reserved = 0;
  std::uint64_t lim = 0, count = 0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&reserved), sizeof reserved);
  in.read(reinterpret_cast<char*>(&lim), sizeof lim);
  in.read(reinterpret_cast<char*>(&count), sizeof count);
  if (!in || std::memcmp(magic, kMagic, 8) != 0 || version != kCacheVersion || lim != limit) return false;
  out.resize(count);
  in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(count * sizeof(std::uint32_t)));
  if (!in) {
    out.clear();
    return false;
  }
  return true;
}

void write_cache(const std::filesystem::path& path, std::uint64_t limit, const std::vector<std::uint32_t>& primes) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return;
    std::uint32_t version = kCacheVersion, reserved = 0;
    std::uint64_t count = primes.size();
    out.write(kMagic, 8);
    out.write(reinterpret_cast<const char*>(&version), sizeof version);
    out.write(reinterpret_cast<const char*>(&reserved), sizeof reserved);
    out.write(reinterpret_cast<const char*>(&limit), sizeof limit);
    out.write(reinterpret_cast<const char*>(&count), sizeof count);
    out.write(reinterpret_cast<const char*>(primes.data()),
              static_cast<std::streamsize>(count * sizeof(std::uint32_t)));
    if (!out) return;
  }
  std::filesystem::rename(tmp, path, ec);
}

bool is_prime_small(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Smallest integer >= x for every member of the enclosure.
std::uint64_t certified_ceil(const Interval& x, const std::string& what) {
  double c_lo = std::ceil(x.lo());
  double c_hi = std::ceil(x.hi());
  if (c_lo != c_hi) {
    // An integer lies inside the enclosure: only acceptable for an exact point.
    if (!(x.is_point() && x.lo() == std::floor(x.lo()))) {
      throw DomainError("cannot decide the integer ceiling of " + what + " " + to_string(x));
    }
  }
  return static_cast<std::uint64_t>(c_hi);
}

}  // namespace

SieveOptions options_from_environment() {
  SieveOptions opts;
  if (const char* dir = std::getenv("COVERIFY_PRIME_CACHE"); dir && *dir) opts.cache_dir = dir;
  return opts;
}

std::vector<std::uint32_t> sieve(std::uint64_t limit, const SieveOptions& opts) {
  if (limit > kMaxLimit) throw DomainError("sieve limit above 2^31");
  double listed = 1.3 * static_cast<double>(limit) / std::log(static_cast<double>(limit) + 2.0) * 4.0;
  double needed = listed + static_cast<double>(kSegment) + std::sqrt(static_cast<double>(limit)) * 8.0;
  if (needed > static_cast<double>(opts.memory_budget)) {
    throw ResourceError("sieve to " + std::to_string(limit) + " needs about " +
                        std::to_string(static_cast<std::uint64_t>(needed)) + " bytes, above the budget");
  }
  std::vector<std::uint32_t> out;
  if (!opts.cache_dir.empty() && read_cache(cache_path(opts.cache_dir, limit), limit, out)) return out;
  out = segmented(limit);
  if (!opts.cache_dir.empty()) write_cache(cache_path(opts.cache_dir, limit), limit, out);
  return out;
}

Interval boundary(int i) {
  if (i < 0) throw DomainError("negative stage index");
  if (i == 0) return Interval(4.0);
  if (i == 1) return Interval(222.0);
  if (i == 2) return Interval(4000.0);
  Interval p = boundary(i - 1);
  return p * sqrt(p);
}

PrimeWindow window_from(std::uint64_t lo, std::uint64_t hi, const std::vector<std::uint32_t>& all) {
  PrimeWindow w;
  w.lo = lo;
  w.hi = hi;
  auto first = std::lower_bound(all.begin(), all.end(), lo);
  auto last = std::lower_bound(all.begin(), all.end(), hi);
  w.primes.assign(first, last);
  return w;
}

PrimeWindow window(int i, const SieveOptions& opts) {
  Interval a = boundary(i), b = boundary(i + 1);
  std::uint64_t lo = certified_ceil(a, "P_" + std::to_string(i));
  std::uint64_t hi = certified_ceil(b, "P_" + std::to_string(i + 1));
  for (const Interval& p : {a, b}) {
    if (p.is_point() && p.lo() < 1e12 && is_prime_small(static_cast<std::uint64_t>(p.lo()))) {
      throw DomainError("stage boundary " + to_decimal(p.lo()) + " is prime");
    }
  }
  return window_from(lo, hi, sieve(hi - 1, opts));
}

Interval tau_k(std::uint64_t p, int k) {
  if (k != 2 && k != 3) throw DomainError("closed form for tau_k only for k = 2, 3");
  if (p < 2) throw DomainError("tau_k needs p >= 2");
  Interval x(static_cast<double>(p));
  Interval pm1 = x - Interval(1.0);
  if (k == 2) return (Interval(3.0) * x - Interval(1.0)) / square(pm1);
  return (Interval(7.0) * x * x - Interval(2.0) * x + Interval(1.0)) / pow_int(pm1, 3);
}

Interval tau_series(std::uint64_t p, int k, int terms, bool with_tail) {
  if (k < 1) throw DomainError("tau series needs k >= 1");
  if (with_tail && k > 3) throw DomainError("tail bound for the tau series only for k <= 3");
  const Interval inv = Interval(1.0) / Interval(static_cast<double>(p));
  auto coeff = [&](int i) {
    mpz_class a, b;
    mpz_ui_pow_ui(a.get_mpz_t(), static_cast<unsigned long>(i + 1), static_cast<unsigned long>(k));
    mpz_ui_pow_ui(b.get_mpz_t(), static_cast<unsigned long>(i), static_cast<unsigned long>(k));
    return Interval::integer(a - b);
  };
  auto term = [&](int i) { return coeff(i) * pow_int(inv, i); };
  Interval s(0.0);
  for (int i = 1; i <= terms; ++i) s = s + term(i);
  if (!with_tail) return s;
  // term(m+1)/term(m) is decreasing in m for k <= 3, so its value at the first
  // omitted index bounds all later ratios.
  int n = terms + 1;
  Interval r = coeff(n + 1) / coeff(n) * inv;
  return s + Interval(0.0, geometric_tail(r, term(n)).hi());
}

WindowStats stats_of(const std::vector<std::uint32_t>& primes) {
  WindowStats s;
  s.count = primes.size();
  if (!primes.empty()) {
    s.lo = primes.front();
    s.hi = std::uint64_t(primes.back()) + 1;
  }
  Interval prod(1.0), inv2(0.0), inv3(0.0), t2(0.0), t3(0.0);
  const Interval one(1.0), two(2.0), three(3.0), seven(7.0);
  for (std::uint32_t q : primes) {
    Interval p(static_cast<double>(q));
    Interval pm1(static_cast<double>(q - 1));
    prod = prod * (p / pm1);
    Interval sq = pm1 * pm1;
    Interval cu = sq * pm1;
    inv2 = inv2 + one / sq;
    inv3 = inv3 + one / cu;
    t2 = t2 + (three * p - one) / sq;
    t3 = t3 + (seven * p * p - two * p + one) / cu;
  }
  s.prod_p_over_pm1 = prod;
  s.sum_inv_sq = inv2;
  s.sum_inv_cube = inv3;
  s.sum_tau2 = t2;
  s.sum_tau3 = t3;
  return s;
}

std::vector<Check> uniform_bound_checks(int i, const WindowStats& s) {
  Interval P = boundary(i);
  Interval logP = log(P);
  Interval L = P * logP;
  Interval log15 = log(Interval::decimal("1.5"));
  std::string w = "window " + std::to_string(i) + ": ";
  std::vector<Check> out;
  out.push_back(make_check(w + "prod p/(p-1) < 1.506318", s.prod_p_over_pm1, "<", Interval::decimal("1.506318")));
  out.push_back(make_check(w + "sum 1/(p-1)^2 < 1.002631/(P log P)", s.sum_inv_sq, "<",
                           Interval::decimal("1.002631") / L));
  out.push_back(make_check(w + "sum 1/(p-1)^3 < 1.004382/(2 P^2 log P)", s.sum_inv_cube, "<",
                           Interval::decimal("1.004382") / (Interval(2.0) * P * P * logP)));
  out.push_back(make_check(w + "sum tau_2 < 3 log 1.5 + 0.00334", s.sum_tau2, "<",
                           Interval(3.0) * log15 + Interval::decimal("0.00334")));
  out.push_back(make_check(w + "sum tau_3 < 7 log 1.5 + 0.00779", s.sum_tau3, "<",
                           Interval(7.0) * log15 + Interval::decimal("0.00779")));
  return out;
}

WindowStats window_stats(int i, const SieveOptions& opts) {
  if (i < 1 || i > 3) throw DomainError("direct window statistics only for stages 1, 2, 3");
  PrimeWindow w = window(i, opts);
  WindowStats s = stats_of(w.primes);
  s.stage = i;
  s.lo = w.lo;
  s.hi = w.hi;
  if (i >= 2) {
    s.checks = uniform_bound_checks(i, s);
    for (const Check& c : s.checks) {
      if (!c.ok) throw VerificationFailure(c.name, "computed " + to_string(c.lhs) + " vs " + to_string(c.rhs));
    }
  }
  return s;
}

}  // namespace coverify::primes
