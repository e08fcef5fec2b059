#include "fracsource/special_dd.hpp"

#include <array>
#include <cmath>

namespace fracsource {

dd exp_dd(dd x) {
  if (x.hi < -745.0) return dd(0.0);
  if (x.hi > 709.0) return dd(std::numeric_limits<double>::infinity());
  // reduce: x = n*ln2 + r, |r| <= ln2/2
  int n = static_cast<int>(std::nearbyint(x.hi / dd_ln2.hi));
  dd r = x - dd_ln2 * static_cast<double>(n);
  // Taylor: term_k = r^k / k!, converges in ~22 terms for |r| <= 0.35
  dd sum = dd(1.0) + r;
  dd term = r;
  for (int k = 2; k < 32; ++k) {
    term = term * r / static_cast<double>(k);
    sum += term;
    if (std::abs(term.hi) < 1e-35 * std::abs(sum.hi)) break;
  }
  return ldexp(sum, n);
}

dd ln_dd(dd x) {
  // double seed + one Newton step on f(y) = e^y - x (quadratic: 1e-16 -> 1e-32)
  double y0 = std::log(x.hi);
  dd t = x * exp_dd(dd(-y0)) - 1.0;
  return dd(y0) + t;
}

namespace {

// sin(pi*v) for |v| <= 1/2 by Taylor in w = pi*v (|w| <= pi/2: ~18 terms)
dd sinpi_taylor(dd v) {
  dd w = dd_pi * v;
  dd w2 = w * w;
  dd term = w;
  dd sum = w;
  for (int k = 1; k < 26; ++k) {
    term = term * w2 / static_cast<double>((2 * k) * (2 * k + 1));
    sum += (k % 2 ? -term : term);
    if (std::abs(term.hi) < 1e-36 * (std::abs(sum.hi) + 1e-300)) break;
  }
  return sum;
}

}  // namespace

dd sinpi_dd(dd x) {
  // sin(pi(n+v)) = (-1)^n sin(pi v), v in [-1/2, 1/2]
  double n = std::nearbyint(x.hi);
  dd v = x - n;
  dd s = sinpi_taylor(v);
  bool odd = std::fmod(std::fabs(n), 2.0) == 1.0;
  return odd ? -s : s;
}

dd cospi_dd(dd x) { return sinpi_dd(dd(0.5) - x); }

namespace {

constexpr int kSpougeA = 41;

struct SpougeTable {
  std::array<dd, kSpougeA> c{};  // c[0] = sqrt(2 pi), c[k] for k = 1..a-1
  SpougeTable() {
    // sqrt(2*pi) = exp(ln(2*pi)/2)
    c[0] = exp_dd(ln_dd(ldexp(dd_pi, 1)) * dd(0.5));
    dd fact(1.0);  // (k-1)!
    for (int k = 1; k < kSpougeA; ++k) {
      if (k > 1) fact = fact * static_cast<double>(k - 1);
      dd ak(static_cast<double>(kSpougeA - k));
      // c_k = (-1)^(k-1) (a-k)^(k-1/2) e^(a-k) / (k-1)!
      dd val = exp_dd((dd(static_cast<double>(k)) - 0.5) * ln_dd(ak) + ak) / fact;
      c[k] = (k % 2 == 1) ? val : -val;
    }
  }
};

const SpougeTable& spouge() {
  static const SpougeTable table;
  return table;
}

}  // namespace

dd lngamma_dd(dd x) {
  // Spouge: Gamma(z+1) = (z+a)^(z+1/2) e^-(z+a) [sqrt(2pi) + sum c_k/(z+k)],
  // relative error of the bracket ~ a^-1/2 (2pi)^-(a+1/2) ~ 1e-34 for a = 41.
  const SpougeTable& tab = spouge();
  dd z = x - 1.0;
  dd acc = tab.c[0];
  for (int k = 1; k < kSpougeA; ++k) acc += tab.c[k] / (z + static_cast<double>(k));
  dd t = z + static_cast<double>(kSpougeA);
  return (x - 0.5) * ln_dd(t) - t + ln_dd(acc);
}

dd rgamma_dd(dd x) {
  if (x.hi > 0.5) return exp_dd(-lngamma_dd(x));
  // exact zeros at 0, -1, -2, ... (the poles of Gamma)
  if (x.lo == 0.0 && x.hi == std::nearbyint(x.hi)) return dd(0.0);
  // reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
  return exp_dd(lngamma_dd(dd(1.0) - x)) * sinpi_dd(x) / dd_pi;
}

}  // namespace fracsource
