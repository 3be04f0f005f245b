#include "coverify/rigor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include <mpfr.h>

namespace coverify {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this magnitude the FMA residual may itself be inexact, so we fall back
// to an unconditional one-ulp widening.
constexpr double kTiny = 0x1p-900;

double next_down(double x) { return std::nextafter(x, -kInf); }
double next_up(double x) { return std::nextafter(x, kInf); }

double checked(double x) {
  if (!std::isfinite(x)) throw OverflowError("interval endpoint left the representable range");
  return x;
}

// Sign of (exact - computed) for a sum; TwoSum is exact barring overflow.
int add_error_sign(double a, double b, double s) {
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return (err > 0) - (err < 0);
}

class Mpfr {
 public:
  Mpfr() { mpfr_init2(v_, 53); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

using MpfrUnary = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

double mpfr_eval(MpfrUnary fn, double x, mpfr_rnd_t rnd) {
  Mpfr in, out;
  mpfr_set_d(in.get(), x, MPFR_RNDN);
  fn(out.get(), in.get(), rnd);
  return checked(mpfr_get_d(out.get(), rnd));
}

}  // namespace

namespace rounding {

double add_down(double a, double b) {
  double s = checked(a + b);
  return add_error_sign(a, b, s) < 0 ? next_down(s) : s;
}

double add_up(double a, double b) {
  double s = checked(a + b);
  return add_error_sign(a, b, s) > 0 ? next_up(s) : s;
}

double mul_down(double a, double b) {
  double p = checked(a * b);
  if (a == 0 || b == 0) return 0.0;
  if (std::fabs(p) < kTiny) return next_down(p);
  double e = std::fma(a, b, -p);
  return e < 0 ? next_down(p) : p;
}

double mul_up(double a, double b) {
  double p = checked(a * b);
  if (a == 0 || b == 0) return 0.0;
  if (std::fabs(p) < kTiny) return next_up(p);
  double e = std::fma(a, b, -p);
  return e > 0 ? next_up(p) : p;
}

namespace {
// Sign of (a/b - q).
int div_error_sign(double a, double b, double q) {
  double r = std::fma(-q, b, a);
  int sr = (r > 0) - (r < 0);
  return b > 0 ? sr : -sr;
}
}  // namespace

double div_down(double a, double b) {
  double q = checked(a / b);
  if (a == 0) return 0.0;
  if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return next_down(q);
  return div_error_sign(a, b, q) < 0 ? next_down(q) : q;
}

double div_up(double a, double b) {
  double q = checked(a / b);
  if (a == 0) return 0.0;
  if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return next_up(q);
  return div_error_sign(a, b, q) > 0 ? next_up(q) : q;
}

}  // namespace rounding

using namespace rounding;

Interval::Interval(double v) : lo_(v), hi_(v) {
  if (!std::isfinite(v)) throw DomainError("interval endpoint must be finite");
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("interval endpoint must be finite");
  if (lo > hi) throw DomainError("interval with lo > hi");
}

double Interval::mid() const { return lo_ + (hi_ - lo_) / 2; }
double Interval::width() const { return add_up(hi_, -lo_); }

bool Interval::contains(const mpq_class& q) const { return mpq_class(lo_) <= q && q <= mpq_class(hi_); }

Interval Interval::rational(const mpq_class& q) {
  Mpfr x;
  mpfr_set_q(x.get(), q.get_mpq_t(), MPFR_RNDD);
  double lo = checked(mpfr_get_d(x.get(), MPFR_RNDD));
  mpfr_set_q(x.get(), q.get_mpq_t(), MPFR_RNDU);
  double hi = checked(mpfr_get_d(x.get(), MPFR_RNDU));
  return Interval(lo, hi);
}

Interval Interval::integer(const mpz_class& z) { return rational(mpq_class(z)); }

Interval Interval::ratio(long long num, long long den) {
  if (den == 0) throw DomainError("zero denominator");
  mpq_class q(mpz_class(std::to_string(num), 10), mpz_class(std::to_string(den), 10));
  q.canonicalize();
  return rational(q);
}

mpq_class decimal_to_rational(std::string_view text) {
  std::string s(text);
  size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
  std::string digits;
  long exp10 = 0;
  bool any = false, dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      digits += c;
      any = true;
      if (dot) --exp10;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!any) throw ParseError("not a decimal number: '" + s + "'");
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    size_t used = 0;
    long e = 0;
    try {
      e = std::stol(s.substr(i), &used);
    } catch (const std::exception&) {
      throw ParseError("bad exponent in '" + s + "'");
    }
    i += used;
    exp10 += e;
  }
  if (i != s.size()) throw ParseError("trailing characters in '" + s + "'");
  mpz_class num(digits, 10);
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
  mpq_class q = exp10 >= 0 ? mpq_class(num * pow10) : mpq_class(num, pow10);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

Interval Interval::decimal(std::string_view text) { return rational(decimal_to_rational(text)); }

Interval operator+(const Interval& a, const Interval& b) {
  return Interval(add_down(a.lo(), b.lo()), add_up(a.hi(), b.hi()));
}

Interval operator-(const Interval& a) { return Interval(-a.hi(), -a.lo()); }

Interval operator-(const Interval& a, const Interval& b) {
  return Interval(add_down(a.lo(), -b.hi()), add_up(a.hi(), -b.lo()));
}

Interval operator*(const Interval& a, const Interval& b) {
  if (a.lo() >= 0 && b.lo() >= 0) {
    return Interval(std::max(0.0, mul_down(a.lo(), b.lo())), mul_up(a.hi(), b.hi()));
  }
  double lo = std::min({mul_down(a.lo(), b.lo()), mul_down(a.lo(), b.hi()), mul_down(a.hi(), b.lo()),
                        mul_down(a.hi(), b.hi())});
  double hi = std::max({mul_up(a.lo(), b.lo()), mul_up(a.lo(), b.hi()), mul_up(a.hi(), b.lo()),
                        mul_up(a.hi(), b.hi())});
  return Interval(lo, hi);
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.lo() <= 0 && b.hi() >= 0) throw DomainError("division by an interval containing 0");
  if (a.lo() >= 0 && b.lo() > 0) return Interval(std::max(0.0, div_down(a.lo(), b.hi())), div_up(a.hi(), b.lo()));
  double lo = std::min({div_down(a.lo(), b.lo()), div_down(a.lo(), b.hi()), div_down(a.hi(), b.lo()),
                        div_down(a.hi(), b.hi())});
  double hi = std::max({div_up(a.lo(), b.lo()), div_up(a.lo(), b.hi()), div_up(a.hi(), b.lo()),
                        div_up(a.hi(), b.hi())});
  return Interval(lo, hi);
}

Interval square(const Interval& x) { return pow_int(x, 2); }

Interval sqrt(const Interval& x) {
  if (x.lo() < 0) throw DomainError("sqrt of an interval reaching below 0");
  return Interval(mpfr_eval(mpfr_sqrt, x.lo(), MPFR_RNDD), mpfr_eval(mpfr_sqrt, x.hi(), MPFR_RNDU));
}

Interval cbrt(const Interval& x) {
  return Interval(mpfr_eval(mpfr_cbrt, x.lo(), MPFR_RNDD), mpfr_eval(mpfr_cbrt, x.hi(), MPFR_RNDU));
}

Interval exp(const Interval& x) {
  double lo = std::max(0.0, mpfr_eval(mpfr_exp, x.lo(), MPFR_RNDD));
  return Interval(lo, mpfr_eval(mpfr_exp, x.hi(), MPFR_RNDU));
}

Interval log(const Interval& x) {
  if (x.lo() <= 0) throw DomainError("log of an interval reaching 0 or below");
  return Interval(mpfr_eval(mpfr_log, x.lo(), MPFR_RNDD), mpfr_eval(mpfr_log, x.hi(), MPFR_RNDU));
}

namespace {
Interval pow_nonneg(const Interval& x, int n) {
  Interval result(1.0);
  Interval base = x;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}
}  // namespace

Interval pow_int(const Interval& x, int n) {
  if (n < 0) return Interval(1.0) / pow_int(x, -n);
  if (n == 0) return Interval(1.0);
  if (x.lo() >= 0) return pow_nonneg(x, n);
  if (x.hi() <= 0) {
    Interval p = pow_nonneg(-x, n);
    return (n % 2 == 0) ? p : -p;
  }
  double m = std::max(-x.lo(), x.hi());
  if (n % 2 == 0) return Interval(0.0, pow_nonneg(Interval(m), n).hi());
  return Interval(-pow_nonneg(Interval(-x.lo()), n).hi(), pow_nonneg(Interval(x.hi()), n).hi());
}

Interval pow(const Interval& x, const Interval& y) {
  if (x.lo() <= 0) throw DomainError("real power of a nonpositive base");
  return exp(y * log(x));
}

Interval factorial(int n) {
  if (n < 0) throw DomainError("factorial of a negative integer");
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Interval::integer(f);
}

Interval factorial_div(const Interval& x, int n) {
  if (n < 0) throw DomainError("factorial of a negative integer");
  if (n <= 20) return pow_int(x, n) / factorial(n);
  Interval r = pow_int(x, 20) / factorial(20);
  for (int k = 21; k <= n; ++k) r = r * x / Interval(static_cast<double>(k));
  return r;
}

Interval hull(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Interval max(const Interval& a, const Interval& b) {
  return Interval(std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Interval min(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi()));
}

Interval abs(const Interval& x) {
  if (x.lo() >= 0) return x;
  if (x.hi() <= 0) return -x;
  return Interval(0.0, std::max(-x.lo(), x.hi()));
}

Interval sum_enclosure(std::span<const Interval> terms) {
  Interval s(0.0);
  for (const Interval& t : terms) s = s + t;
  return s;
}

Interval geometric_tail(const Interval& ratio, const Interval& first_omitted) {
  if (!(ratio.hi() < 1)) throw TailDivergence("geometric tail needs ratio < 1");
  if (first_omitted.lo() < 0) throw DomainError("geometric tail needs nonnegative terms");
  double hi = div_up(first_omitted.hi(), add_down(1.0, -std::max(ratio.hi(), 0.0)));
  return Interval(first_omitted.lo(), checked(hi));
}

SeriesSum sum_series(const std::function<Interval(int)>& term,
                     const std::function<Interval(int)>& ratio_bound, int start, double rel_tol,
                     int max_terms) {
  Interval partial(0.0);
  Interval t = term(start);
  for (int n = start; n < start + max_terms; ++n) {
    partial = partial + t;
    Interval next = term(n + 1);
    if (next.hi() < rel_tol * partial.lo()) {
      Interval r = ratio_bound(n + 1);
      if (r.hi() < 1) {
        Interval tail = geometric_tail(r, next);
        return SeriesSum{partial + Interval(0.0, tail.hi()), n + 1, tail};
      }
    }
    t = next;
  }
  throw TailDivergence("series did not reach a certified truncation point");
}

SeriesSum sum_series_fixed(const std::function<Interval(int)>& term,
                           const std::function<Interval(int)>& ratio_bound, int start, int last) {
  Interval partial(0.0);
  for (int n = start; n <= last; ++n) partial = partial + term(n);
  Interval r = ratio_bound(last + 1);
  if (!(r.hi() < 1)) throw TailDivergence("ratio bound not below 1 at the truncation point");
  Interval tail = geometric_tail(r, term(last + 1));
  return SeriesSum{partial + Interval(0.0, tail.hi()), last + 1, tail};
}

std::string to_decimal(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string to_string(const Interval& x) { return "[" + to_decimal(x.lo()) + ", " + to_decimal(x.hi()) + "]"; }

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ok: return "ok";
    case ErrorCode::domain: return "DomainError";
    case ErrorCode::overflow: return "OverflowError";
    case ErrorCode::resource: return "ResourceError";
    case ErrorCode::verification: return "VerificationFailure";
    case ErrorCode::parse: return "ParseError";
    case ErrorCode::validation: return "ValidationError";
    case ErrorCode::size: return "SizeError";
    case ErrorCode::precondition: return "PreconditionError";
    case ErrorCode::divergence: return "DivergenceError";
    case ErrorCode::undecidable: return "UndecidableOrdering";
    case ErrorCode::decomposition: return "DecompositionError";
    case ErrorCode::empty_fiber: return "EmptyFiberError";
    case ErrorCode::tail_divergence: return "TailDivergence";
    case ErrorCode::io: return "IoError";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::internal: return "InternalError";
  }
  return "unknown";
}

}  // namespace coverify
