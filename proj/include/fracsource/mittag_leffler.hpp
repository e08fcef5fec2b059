// Mittag-Leffler function E_{alpha,beta}(-x) on the negative real axis and the
// relaxation kernel built from it.
//
// Evaluation scheme (r = x^(1/alpha) is the regime coordinate):
//   r <= 36  double-double power series, terms formed in log space as
//            exp(k ln x - lnGamma(alpha k + beta)); the Gamma argument is
//            formed in double-double (forming it in binary64 perturbs
//            e^50-sized terms by ~1e7 absolute).
//   r >= 32  algebraic asymptotic series truncated where its smooth magnitude
//            envelope Gamma(1-beta+k alpha)/pi x^-k starts diverging, plus the
//            saddle exponential pair (2/a) r^(1-b) e^(r cos(pi/a))
//            cos(r sin(pi/a) + (1-b) pi/a) with weight 0 / 1/2 / 1 for
//            a < 1 / a = 1 / a > 1 (the only saddles on the principal sheet).
//   band [32,36]: both, smaller estimated error wins.
// Measured worst relative error on the frozen reference grid: ~8e-12.
#pragma once

#include <utility>
#include <vector>

#include "fracsource/ddouble.hpp"

namespace fracsource {

struct MLParams {
  double alpha;  // > 0
  double beta;   // > 0
};

struct MLResult {
  double value;
  double abs_err_est;  // internal absolute error estimate
  bool degraded;       // estimate exceeds 1e-12 * |value|: accuracy degraded
};

// E_{alpha,beta}(-x) for x >= 0. Throws std::invalid_argument on bad params.
MLResult ml_eval(const MLParams& p, double x);

// K-term algebraic asymptotic expansion sum_{k=1..K} (-1)^(k+1)
// rgamma(beta - k alpha) x^-k and the magnitude of the first omitted term.
// The exponentially small saddle part is deliberately not included: this is
// the power-law object whose truncation error the caller probes.
std::pair<double, double> ml_asymptotic(const MLParams& p, double x, int K);

// Relaxation kernel s^(alpha-1) E_{alpha,alpha}(-lambda s^alpha), s > 0
// (s = 0 is rejected: the kernel is singular there for alpha < 1).
double ml_kernel(double alpha, double lambda, double s);

// 1 - E_{alpha,1}(-x), cancellation-free: summed from the k = 1 term for
// r <= 36 so the result near 0 keeps full relative accuracy. This is the
// bounded antiderivative factor of the relaxation kernel:
//   d/ds [ lambda^-1 (1 - E_{alpha,1}(-lambda s^alpha)) ] = ml_kernel.
dd one_minus_ml_e1_dd(double alpha, double x);
double one_minus_ml_e1(double alpha, double x);

// Fast kernel evaluator for quadrature inner loops: Chebyshev interpolant of
// E_{alpha,beta}(-x) on x in [0, 36^alpha] (nodes from ml_eval) + the cached
// asymptotic branch beyond. Immutable after construction; safe to share
// across threads. Measured error ~6e-12; never used by ml_eval itself, so
// quadrature-vs-closed-form checks cross two independent evaluation routes.
class MLFastEvaluator {
 public:
  MLFastEvaluator(double alpha, double beta);
  double operator()(double x) const;
  double alpha() const { return alpha_; }

 private:
  double asym(double x) const;

  double alpha_, beta_, inv_alpha_;
  double x_hi_;                     // Chebyshev domain [0, x_hi_]
  double x_switch_;                 // Chebyshev/asymptotic handoff (r = 34)
  std::vector<double> cheb_;        // Chebyshev coefficients
  std::vector<double> asym_coeff_;  // signed (-1)^(k+1) rgamma(beta - k alpha)
  std::vector<double> env_logb_;    // lgamma(1-beta+k alpha) - ln pi
  double pair_weight_;              // 0 / 0.5 / 1
  double pair_cos_, pair_sin_;      // cos(pi/alpha), sin(pi/alpha)
};

}  // namespace fracsource
