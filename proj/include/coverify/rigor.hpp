#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "coverify/errors.hpp"

namespace coverify {

/// Closed interval [lo, hi] of doubles enclosing a real number.
///
/// Every operation below returns an interval containing the exact image of
/// its operands. Basic arithmetic uses error-free transforms to round each
/// endpoint outward by at most one ulp, and only when the floating-point
/// result was inexact. Transcendentals go through MPFR with directed rounding.
class Interval {
 public:
  Interval() = default;
  Interval(double v);  // NOLINT(google-explicit-constructor): points convert implicitly
  Interval(double lo, double hi);

  /// Tightest enclosure of a decimal literal such as "0.246514091" or "1e-3".
  static Interval decimal(std::string_view text);
  static Interval rational(const mpq_class& q);
  static Interval ratio(long long num, long long den);
  static Interval integer(const mpz_class& z);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mid() const;
  double width() const;
  bool is_point() const { return lo_ == hi_; }
  bool contains(double x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  bool contains(const mpq_class& q) const;
  bool intersects(const Interval& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }

  /// Certified comparisons: true only if the relation holds for every pair of members.
  bool certainly_lt(const Interval& o) const { return hi_ < o.lo_; }
  bool certainly_le(const Interval& o) const { return hi_ <= o.lo_; }
  bool certainly_gt(const Interval& o) const { return lo_ > o.hi_; }
  bool certainly_ge(const Interval& o) const { return lo_ >= o.hi_; }
  bool certainly_positive() const { return lo_ > 0; }

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

inline Interval iv(double lo, double hi) { return Interval(lo, hi); }

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
inline Interval& operator+=(Interval& a, const Interval& b) { return a = a + b; }
inline Interval& operator-=(Interval& a, const Interval& b) { return a = a - b; }
inline Interval& operator*=(Interval& a, const Interval& b) { return a = a * b; }
inline Interval& operator/=(Interval& a, const Interval& b) { return a = a / b; }

Interval sqrt(const Interval& x);
Interval cbrt(const Interval& x);
Interval exp(const Interval& x);
Interval log(const Interval& x);
Interval pow_int(const Interval& x, int n);
/// Real power x^y for x > 0 via exp(y log x).
Interval pow(const Interval& x, const Interval& y);
Interval factorial(int n);
/// x^n / n!
Interval factorial_div(const Interval& x, int n);
Interval square(const Interval& x);
Interval hull(const Interval& a, const Interval& b);
/// Interval of max(a, b) over members.
Interval max(const Interval& a, const Interval& b);
Interval min(const Interval& a, const Interval& b);
Interval abs(const Interval& x);

/// Exact interval sum in left-to-right order.
Interval sum_enclosure(std::span<const Interval> terms);

/// Upper enclosure of a nonnegative tail t_0 + t_1 + ... with t_0 = first_omitted
/// and t_{m+1}/t_m <= ratio.hi for all m.
Interval geometric_tail(const Interval& ratio, const Interval& first_omitted);

/// Result of summing a nonnegative series with a certified geometric tail.
struct SeriesSum {
  Interval value;
  int terms = 0;  // index one past the last explicitly summed term
  Interval tail;
};

/// Sums term(n) for n = start, start+1, ... and closes the tail geometrically.
/// ratio_bound(n) must bound term(m+1)/term(m) for every m >= n. Truncation
/// happens once term(n).hi < rel_tol * partial.lo and ratio_bound(n+1).hi < 1,
/// or unconditionally at max_terms if the ratio test passes there.
SeriesSum sum_series(const std::function<Interval(int)>& term,
                     const std::function<Interval(int)>& ratio_bound, int start,
                     double rel_tol = 1e-18, int max_terms = 10000);

/// Sums term(start..last) explicitly and adds the geometric tail from last+1.
SeriesSum sum_series_fixed(const std::function<Interval(int)>& term,
                           const std::function<Interval(int)>& ratio_bound, int start, int last);

/// Round-trip-exact shortest decimal rendering of a double.
std::string to_decimal(double x);
std::string to_string(const Interval& x);

/// Exact rational value of a decimal literal.
mpq_class decimal_to_rational(std::string_view text);

namespace rounding {
double add_down(double a, double b);
double add_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);
double div_down(double a, double b);
double div_up(double a, double b);
}  // namespace rounding

}  // namespace coverify
