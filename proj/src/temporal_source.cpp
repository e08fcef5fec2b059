#include "fracsource/temporal_source.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fracsource {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Quintic smoothstep: S(0) = 0, S(1) = 1, S' = S'' = 0 at both ends.
double smoothstep(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
double smoothstep_prime(double u) {
  const double v = u * (1.0 - u);
  return 30.0 * v * v;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

using gk15 = boost::math::quadrature::gauss_kronrod<double, 15>;

}  // namespace

TemporalSource TemporalSource::constant(double mu0) {
  TemporalSource s;
  s.family_ = MuFamily::constant;
  s.mu0_ = mu0;
  return s;
}

TemporalSource TemporalSource::inverse_linear(double A) {
  TemporalSource s;
  s.family_ = MuFamily::inverse_linear;
  s.p1_ = A;
  return s;
}

TemporalSource TemporalSource::rational_tail(double mu0, std::vector<double> muj,
                                             double t0) {
  if (muj.empty() || muj.size() > 12) {
    throw std::invalid_argument("rational_tail: need 1..12 tail coefficients");
  }
  if (!(t0 > 0.0)) throw std::invalid_argument("rational_tail: t0 must be > 0");
  TemporalSource s;
  s.family_ = MuFamily::rational_tail;
  s.mu0_ = mu0;
  s.muj_ = std::move(muj);
  s.p1_ = t0;
  return s;
}

TemporalSource TemporalSource::compact_indicator(double T) {
  if (!(T > 0.0)) throw std::invalid_argument("compact_indicator: T must be > 0");
  TemporalSource s;
  s.family_ = MuFamily::compact_indicator;
  s.p1_ = T;
  return s;
}

TemporalSource TemporalSource::compact_bump(double t_flat, double t_end) {
  if (!(t_flat > 0.0) || !(t_end > t_flat)) {
    throw std::invalid_argument("compact_bump: need 0 < t_flat < t_end");
  }
  TemporalSource s;
  s.family_ = MuFamily::compact_bump;
  s.p1_ = t_flat;
  s.p2_ = t_end;
  return s;
}

TemporalSource TemporalSource::sub_gaussian(double c1, double c2) {
  if (!(c2 > 0.0)) throw std::invalid_argument("sub_gaussian: c2 must be > 0");
  TemporalSource s;
  s.family_ = MuFamily::sub_gaussian;
  s.p1_ = c1;
  s.p2_ = c2;
  return s;
}

TemporalSource TemporalSource::damped_oscillation() {
  TemporalSource s;
  s.family_ = MuFamily::damped_oscillation;
  return s;
}

double TemporalSource::mu_eval(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("mu_eval: t must be >= 0");
  switch (family_) {
    case MuFamily::constant:
      return mu0_;
    case MuFamily::inverse_linear:
      return p1_ / (1.0 + t);
    case MuFamily::rational_tail: {
      const double h = 0.5 * p1_;
      if (t <= h) return mu0_;
      double w = (t >= p1_) ? 1.0 : smoothstep((t - h) / h);
      double P = 0.0;
      for (std::size_t j = muj_.size(); j >= 1; --j) P = (P + muj_[j - 1]) / t;
      return mu0_ + w * P;
    }
    case MuFamily::compact_indicator:
      return (t < p1_) ? 1.0 : 0.0;
    case MuFamily::compact_bump:
      if (t <= p1_) return 1.0;
      if (t >= p2_) return 0.0;
      return 1.0 - smoothstep((t - p1_) / (p2_ - p1_));
    case MuFamily::sub_gaussian:
      return p1_ * std::exp(-p2_ * std::sqrt(t));
    case MuFamily::damped_oscillation:
      return std::exp(-t) * std::sin(t);
  }
  return 0.0;
}

double TemporalSource::mu_prime_eval(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("mu_prime_eval: t must be >= 0");
  switch (family_) {
    case MuFamily::constant:
      return 0.0;
    case MuFamily::inverse_linear: {
      const double d = 1.0 + t;
      return -p1_ / (d * d);
    }
    case MuFamily::rational_tail: {
      const double h = 0.5 * p1_;
      if (t <= h) return 0.0;
      double P = 0.0, Pp = 0.0;
      for (std::size_t j = muj_.size(); j >= 1; --j) {
        P = (P + muj_[j - 1]) / t;
        Pp = (Pp - static_cast<double>(j) * muj_[j - 1]) / t;
      }
      Pp /= t;
      if (t >= p1_) return Pp;
      const double u = (t - h) / h;
      return smoothstep_prime(u) / h * P + smoothstep(u) * Pp;
    }
    case MuFamily::compact_indicator:
      return 0.0;  // a.e.; the jump at T is reported via jumps()
    case MuFamily::compact_bump: {
      if (t <= p1_ || t >= p2_) return 0.0;
      const double w = p2_ - p1_;
      return -smoothstep_prime((t - p1_) / w) / w;
    }
    case MuFamily::sub_gaussian: {
      if (t == 0.0) {
        // integrable endpoint singularity
        return p1_ == 0.0 ? 0.0
                          : -std::copysign(std::numeric_limits<double>::infinity(), p1_);
      }
      const double rt = std::sqrt(t);
      return -0.5 * p1_ * p2_ / rt * std::exp(-p2_ * rt);
    }
    case MuFamily::damped_oscillation:
      return std::exp(-t) * (std::cos(t) - std::sin(t));
  }
  return 0.0;
}

std::vector<double> TemporalSource::breakpoints() const {
  switch (family_) {
    case MuFamily::rational_tail:
      return {0.5 * p1_, p1_};
    case MuFamily::compact_indicator:
      return {p1_};
    case MuFamily::compact_bump:
      return {p1_, p2_};
    case MuFamily::damped_oscillation: {
      // zeros of sin at k pi until the envelope is negligible
      std::vector<double> b;
      for (int k = 1; k * kPi < 60.0; ++k) b.push_back(k * kPi);
      return b;
    }
    default:
      return {};
  }
}

std::vector<TemporalSource::Jump> TemporalSource::jumps() const {
  if (family_ == MuFamily::compact_indicator) return {{p1_, -1.0}};
  return {};
}

double TemporalSource::mu_coeff(int j) const {
  if (j < 0 || j > 64) throw std::invalid_argument("mu_coeff: j out of range");
  if (j == 0) return mu0_;
  switch (family_) {
    case MuFamily::inverse_linear:
      // A/(1+t) = A sum_j (-1)^(j-1) t^-j
      return (j % 2 == 1) ? p1_ : -p1_;
    case MuFamily::rational_tail:
      return (static_cast<std::size_t>(j) <= muj_.size()) ? muj_[j - 1] : 0.0;
    default:
      return 0.0;  // constant and fast-decay families have no power tail
  }
}

bool TemporalSource::decays_fast() const {
  switch (family_) {
    case MuFamily::compact_indicator:
    case MuFamily::compact_bump:
    case MuFamily::sub_gaussian:
    case MuFamily::damped_oscillation:
      return true;
    default:
      return false;
  }
}

double TemporalSource::sup_abs() const {
  switch (family_) {
    case MuFamily::constant:
      return std::fabs(mu0_);
    case MuFamily::inverse_linear:
      return std::fabs(p1_);
    case MuFamily::compact_indicator:
    case MuFamily::compact_bump:
      return 1.0;
    case MuFamily::sub_gaussian:
      return std::fabs(p1_);
    case MuFamily::damped_oscillation:
      // max of e^-t sin t at t = pi/4
      return std::exp(-0.25 * kPi) * std::sin(0.25 * kPi);
    case MuFamily::rational_tail: {
      // coarse scan past the window; the tail is monotone-ish but cheap to
      // bound honestly by sampling densely
      double m = std::fabs(mu0_);
      for (int i = 0; i <= 20000; ++i) {
        const double t = p1_ * (0.5 + i * 2e-3);  // covers [t0/2, 40.5 t0]
        m = std::max(m, std::fabs(mu_eval(t)));
      }
      return m * (1.0 + 1e-6);
    }
  }
  return 0.0;
}

void TemporalSource::mu_prime_support(double* lo, double* hi) const {
  const double inf = std::numeric_limits<double>::infinity();
  switch (family_) {
    case MuFamily::constant:
    case MuFamily::compact_indicator:  // derivative vanishes a.e.
      *lo = 0.0;
      *hi = 0.0;
      return;
    case MuFamily::inverse_linear:
    case MuFamily::sub_gaussian:
    case MuFamily::damped_oscillation:
      *lo = 0.0;
      *hi = inf;
      return;
    case MuFamily::rational_tail:
      *lo = 0.5 * p1_;
      *hi = inf;
      return;
    case MuFamily::compact_bump:
      *lo = p1_;
      *hi = p2_;
      return;
  }
  *lo = 0.0;
  *hi = inf;
}

double TemporalSource::rbar_eval(int mprime, double s) const {
  if (mprime < 1) throw std::invalid_argument("rbar_eval: m' must be >= 1");
  if (!(s > 0.0)) throw std::invalid_argument("rbar_eval: s must be > 0");
  const int m = mprime - 1;
  double v = mu_eval(s) - mu0_;
  for (int j = 1; j <= m; ++j) v -= mu_coeff(j) * std::pow(s, -j);
  const double mum1 = mu_coeff(m + 1);
  v -= mum1 * std::pow(s, -m) / (1.0 + s);
  for (int j = m + 2; j <= mprime; ++j) {
    const double par = (((j - m) % 2) == 0) ? 1.0 : -1.0;
    v -= (mu_coeff(j) + par * mum1) * std::pow(s, -j);
  }
  return v;
}

TemporalSource::Moment TemporalSource::c_mu(int m) const {
  if (m < 0 || m > 40) throw std::invalid_argument("c_mu: m out of range");
  switch (family_) {
    case MuFamily::constant:
      return {0.0, 0.0};  // centered source vanishes identically
    case MuFamily::inverse_linear:
      // the skeleton reproduces the source exactly: rbar == 0
      return {0.0, 0.0};
    case MuFamily::compact_indicator: {
      const double v = std::pow(p1_, m + 1) / (m + 1);
      return {v, 1e-15 * std::fabs(v)};
    }
    case MuFamily::compact_bump: {
      // plateau part exactly, quintic descent by quadrature (the integrand
      // is a polynomial, so the rule is exact and the error tiny)
      const double plateau = std::pow(p1_, m + 1) / (m + 1);
      double err = 0.0;
      const double tail = gk15::integrate(
          [this, m](double s) { return std::pow(s, m) * mu_eval(s); }, p1_, p2_,
          10, 1e-14, &err);
      return {plateau + tail, err + 1e-15 * std::fabs(plateau)};
    }
    case MuFamily::sub_gaussian: {
      // int_0^inf s^m c1 e^(-c2 sqrt(s)) ds = 2 c1 (2m+1)! / c2^(2m+2)
      const double v =
          2.0 * p1_ * factorial(2 * m + 1) / std::pow(p2_, 2 * (m + 1));
      return {v, 1e-15 * std::fabs(v)};
    }
    case MuFamily::damped_oscillation: {
      // int_0^inf s^m e^-s sin s ds = Im[ m! (1-i)^-(m+1) ]
      const std::complex<double> z(1.0, -1.0);
      const double v =
          factorial(m) * std::imag(std::pow(z, -static_cast<double>(m + 1)));
      return {v, 1e-15 * std::fabs(v)};
    }
    case MuFamily::rational_tail: {
      // adaptive panels on [0, B] split at the window kinks, then s = 1/u
      // for [B, inf); the integrand decays like s^-2 there
      const double h = 0.5 * p1_;
      const double B = std::max(1.0, p1_);
      auto fin = [this, m](double s) {
        return std::pow(s, m) * rbar_eval(m + 1, s);
      };
      std::vector<double> knots = {0.0, h, p1_};
      if (B > p1_) knots.push_back(B);
      double total = 0.0, err_total = 0.0;
      for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        double err = 0.0;
        total += gk15::integrate(fin, knots[i], knots[i + 1], 12, 1e-11, &err);
        err_total += err;
      }
      auto ftail = [this, m](double u) {
        return std::pow(u, -(m + 2)) * rbar_eval(m + 1, 1.0 / u);
      };
      double err = 0.0;
      total += gk15::integrate(ftail, 0.0, 1.0 / B, 12, 1e-11, &err);
      err_total += err;
      return {total, err_total};
    }
  }
  return {0.0, 0.0};
}

std::optional<double> TemporalSource::sign_stabilization_time(
    double horizon) const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("sign_stabilization_time: bad horizon");
  }
  const int n = 8192;
  double last_change = 0.0;
  int prev_sign = 0;
  double prev_t = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = horizon * i / n;
    const int s = sign_of(mu_eval(t));
    if (s == 0) continue;  // touching zero is not a flip
    if (prev_sign != 0 && s != prev_sign) {
      // bisect the bracket to locate the flip
      double a = prev_t, b = t;
      int sa = prev_sign;
      for (int it = 0; it < 80 && (b - a) > 1e-12 * horizon; ++it) {
        const double mid = 0.5 * (a + b);
        const int sm = sign_of(mu_eval(mid));
        if (sm == 0 || sm == sa) {
          a = mid;
        } else {
          b = mid;
        }
      }
      last_change = 0.5 * (a + b);
    }
    prev_sign = s;
    prev_t = t;
  }
  if (last_change > 0.95 * horizon) return std::nullopt;
  return last_change;
}

}  // namespace fracsource
