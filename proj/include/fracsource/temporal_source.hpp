// Temporal source factors mu(t) used on the right-hand side f(x) mu(t).
//
// Each family carries, besides pointwise evaluation, exactly the structure
// the long-time machinery needs:
//   * the inverse-power coefficients mu_j of mu(t) ~ mu_0 + sum_j mu_j t^-j,
//   * the regularized remainder rbar after peeling that skeleton off (the
//     (1+s)^-1 counterterm keeps it integrable down to s = 0),
//   * the log-weight moments c_mu(m) = int_0^inf s^m rbar_{mu,m+1}(s) ds of
//     the centered source mu - mu_0, with closed forms where the family
//     admits one and adaptive quadrature otherwise,
//   * breakpoints/jumps so quadrature panels can respect the kinks.
#pragma once

#include <optional>
#include <vector>

namespace fracsource {

enum class MuFamily {
  constant,
  inverse_linear,
  rational_tail,
  compact_indicator,
  compact_bump,
  sub_gaussian,
  damped_oscillation,
};

class TemporalSource {
 public:
  // mu(t) = mu0
  static TemporalSource constant(double mu0);
  // mu(t) = A / (1 + t); mu_j = A (-1)^(j-1), all moments vanish exactly
  static TemporalSource inverse_linear(double A);
  // mu(t) = mu0 + w(t) sum_{j=1..J} mu_j t^-j with a quintic window w that
  // is 0 below t0/2 and 1 above t0 (keeps t = 0 regular)
  static TemporalSource rational_tail(double mu0, std::vector<double> muj,
                                      double t0);
  // mu(t) = 1 on [0, T), 0 after (jump at T)
  static TemporalSource compact_indicator(double T);
  // mu(t) = 1 on [0, t_flat], quintic descent to 0 at t_end, 0 after (C^2)
  static TemporalSource compact_bump(double t_flat, double t_end);
  // mu(t) = c1 exp(-c2 sqrt(t))
  static TemporalSource sub_gaussian(double c1, double c2);
  // mu(t) = exp(-t) sin(t): sign flips at every multiple of pi
  static TemporalSource damped_oscillation();

  double mu_eval(double t) const;
  double mu_prime_eval(double t) const;  // a.e. derivative; jumps listed below

  // Panel-split hints for quadrature: kinks and support edges.
  std::vector<double> breakpoints() const;
  struct Jump {
    double t;
    double delta;  // mu(t+) - mu(t-)
  };
  std::vector<Jump> jumps() const;

  // mu_j of the t -> inf expansion; j = 0 is the limit value mu_0.
  // Indices beyond the family's finite tail are genuinely zero.
  double mu_coeff(int j) const;
  // true when mu decays faster than every power (all mu_j = 0): these
  // sources certify through moments, persistent ones through their tail.
  bool decays_fast() const;
  MuFamily family() const { return family_; }

  // sup_t |mu(t)|, used by truncation-tail bounds.
  double sup_abs() const;
  // support of the classical derivative [lo, hi] (hi may be +inf); jumps are
  // reported separately. Lets integration-by-parts quadrature skip dead range.
  void mu_prime_support(double* lo, double* hi) const;

  // Regularized remainder of the centered source, literally
  //   rbar_{mu,m'}(s) = (mu - mu_0)(s) - sum_{j=1..m} mu_j s^-j
  //                     - mu_{m+1} s^-m (1+s)^-1
  //                     - sum_{j=m+2..m'} (mu_j + (-1)^(j-m) mu_{m+1}) s^-j
  // with m = m' - 1 entering c_mu below.
  double rbar_eval(int mprime, double s) const;

  struct Moment {
    double value;
    double abs_err;
  };
  // c_mu(m) = int_0^inf s^m rbar_{mu,m+1}(s) ds of the centered source.
  Moment c_mu(int m) const;

  // Smallest time after which mu keeps one sign on [0, horizon]; touching
  // zero is not a sign change. Empty when a flip lands in the trailing 5%
  // of the horizon (no evidence the flipping has stopped).
  std::optional<double> sign_stabilization_time(double horizon) const;

 private:
  TemporalSource() = default;

  MuFamily family_ = MuFamily::constant;
  double mu0_ = 0.0;                // limit value (coefficient j = 0)
  std::vector<double> muj_;         // finite inverse-power tail, j >= 1
  double p1_ = 0.0, p2_ = 0.0;      // family shape parameters
};

}  // namespace fracsource
