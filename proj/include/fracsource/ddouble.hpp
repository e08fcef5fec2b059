// Double-double arithmetic: an unevaluated sum hi+lo of two doubles giving
// ~106 bits (u = 2^-104). Classic error-free transformations (Dekker/Knuth).
// Used where double precision demonstrably fails: alternating series with
// e^r-sized cancellation, ill-conditioned least squares, tail residuals a few
// hundred ulp below the leading term.
#pragma once

#include <cmath>
#include <limits>

namespace fracsource {

struct dd {
  double hi = 0.0;
  double lo = 0.0;

  dd() = default;
  dd(double h) : hi(h), lo(0.0) {}
  dd(double h, double l) : hi(h), lo(l) {}
};

// |a| >= |b| assumed: s = fl(a+b), err exact
inline dd quick_two_sum(double a, double b) {
  double s = a + b;
  return dd(s, b - (s - a));
}

// no magnitude assumption
inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return dd(s, (a - (s - bb)) + (b - bb));
}

// exact product via FMA
inline dd two_prod(double a, double b) {
  double p = a * b;
  return dd(p, std::fma(a, b, -p));
}

inline dd operator+(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  dd t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline dd operator+(dd a, double b) {
  dd s = two_sum(a.hi, b);
  s.lo += a.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline dd operator+(double a, dd b) { return b + a; }

inline dd operator-(dd a) { return dd(-a.hi, -a.lo); }
inline dd operator-(dd a, dd b) { return a + (-b); }
inline dd operator-(dd a, double b) { return a + (-b); }
inline dd operator-(double a, dd b) { return (-b) + a; }

inline dd operator*(dd a, dd b) {
  dd p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline dd operator*(dd a, double b) {
  dd p = two_prod(a.hi, b);
  p.lo += a.lo * b;
  return quick_two_sum(p.hi, p.lo);
}

inline dd operator*(double a, dd b) { return b * a; }

// long division: three quotient digits then renormalize
inline dd operator/(dd a, dd b) {
  double q1 = a.hi / b.hi;
  dd r = a - b * q1;
  double q2 = r.hi / b.hi;
  r = r - b * q2;
  double q3 = r.hi / b.hi;
  dd q = quick_two_sum(q1, q2);
  return q + q3;
}

inline dd operator/(dd a, double b) { return a / dd(b); }
inline dd operator/(double a, dd b) { return dd(a) / b; }

inline dd& operator+=(dd& a, dd b) { a = a + b; return a; }
inline dd& operator+=(dd& a, double b) { a = a + b; return a; }
inline dd& operator-=(dd& a, dd b) { a = a - b; return a; }
inline dd& operator*=(dd& a, dd b) { a = a * b; return a; }
inline dd& operator*=(dd& a, double b) { a = a * b; return a; }
inline dd& operator/=(dd& a, dd b) { a = a / b; return a; }

inline bool operator<(dd a, dd b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(dd a, dd b) { return b < a; }
inline bool operator<=(dd a, dd b) { return !(b < a); }
inline bool operator>=(dd a, dd b) { return !(a < b); }
inline bool operator==(dd a, dd b) { return a.hi == b.hi && a.lo == b.lo; }

inline dd fabs(dd a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

// exact scaling by a power of two
inline dd ldexp(dd a, int n) { return dd(std::ldexp(a.hi, n), std::ldexp(a.lo, n)); }

inline double to_double(dd a) { return a.hi; }

// one Newton step on a double seed squares the error: ~1e-33 relative
inline dd sqrt_dd(dd a) {
  if (!(a.hi > 0.0)) return dd(0.0);
  dd y(std::sqrt(a.hi));
  return ldexp(y + a / y, -1);
}

// multiply double-double by an exact int (error-free when the int is small)
inline dd mul_int(dd a, long n) { return a * dd(static_cast<double>(n)); }

}  // namespace fracsource
