#pragma once
// Long-time expansion of the per-mode step/convolution response and of
// aggregated observation traces.
//
// A term is c * lambda^p * t^g * (log t)^e with g <= 0.  The per-mode
// expansion of psi_n collects, for a source with tail mu ~ mu_0 + sum mu_j t^-j:
//
//   * the persistent level     mu_0 lambda^-1,
//   * the pure fractional tail sum_k (-1)^{l_k} mu_0 rgamma(1 - l_k a)
//                              lambda^{-l_k-1} t^{-l_k a},
//   * mixed terms at t^{-l_k a - j} carrying mu_j log t + c_{mu,j-1} plus a
//     structural constant that vanishes when every mu_j (j >= 1) is zero,
//   * integer-exponent terms at t^{-j-m} with lambda^{-1-m/a} whose
//     coefficients are never specified (emitted as placeholders, coeff 0).
//
// Only the first l_k alpha not hitting a positive integer survive: the others
// sit on poles of the reciprocal gamma factors.  Terms decaying at or below
// the requested remainder order N are dropped, and exponent collisions (which
// occur for rational alpha) are merged by summing coefficients; a merge with
// a placeholder clears the explicit flag of the merged term.
//
// The aggregated expansion folds the mode sum into spectral moments
// A_g = sum_n a_n lambda_n^{-g-1}; its terms carry lambda_power 0.

#include <vector>

#include "fracsource/forward_solver.hpp"
#include "fracsource/fractional_order.hpp"
#include "fracsource/temporal_source.hpp"

namespace fracsource {

struct ExpansionTerm {
  double coeff = 0.0;         // numeric coefficient; 0 for unfitted placeholders
  double lambda_power = 0.0;  // p in lambda^p (0 after aggregation over modes)
  double t_power = 0.0;       // g in t^g, always <= 0
  bool has_log = false;       // carries a log t factor
  bool is_explicit = true;    // coefficient fully determined vs placeholder
};

struct AsymptoticSeries {
  std::vector<ExpansionTerm> terms;  // descending t_power, no duplicate keys
  int order_N = 0;                   // remainder is O(t^-N) up to log factors
};

// Per-mode series for the response at eigenvalue lambda; N is the remainder
// order (all kept terms decay strictly slower than t^-N).
AsymptoticSeries expansion_psi(const FractionalOrder& alpha, double lambda,
                               const TemporalSource& src, int N);

// Aggregated series for sum_n a_n psi_n(t).  Rejects inputs whose weighted
// sum a_n lambda_n^-1 log(1 + lambda_n) fails to be finite.
AsymptoticSeries expansion_sum(const std::vector<double>& a,
                               const std::vector<double>& lambdas,
                               const FractionalOrder& alpha,
                               const TemporalSource& src, int N);

// Explicit structural factors of the expansion, shared with the inverse
// fits (recovery divides by exactly what emission multiplied by):
//   pure tail   t^{-l a}:      (-1)^l rgamma(1 - l a) (times mu_0 lambda^{-l-1})
//   mixed term  t^{-l a - j}:  (-1)^{l-1+j} rgamma(-l a) binom(-l a - 1, j - 1)
//                              (times lambda^{-l-1} (mu_j log t + c_{mu,j-1}))
double pure_term_factor(double alpha, int l);
double mixed_term_factor(double alpha, int l, int j);

struct SpectralMoments {
  std::vector<double> gammas;
  std::vector<double> values;  // A_g = sum_n a_n lambda_n^{-g-1}
};
SpectralMoments spectral_moments(const std::vector<double>& a,
                                 const std::vector<double>& lambdas,
                                 const std::vector<double>& gammas);

// Numeric value of the series at (lambda, t); placeholders contribute their
// stored coefficient (zero unless filled by a comparison fit).
double series_value(const AsymptoticSeries& s, double lambda, double t);

struct ExpansionComparison {
  std::vector<double> residual;  // |numeric - series| sample by sample
  double remainder_slope = 0.0;  // log-log slope of the residual trace
  AsymptoticSeries fitted;       // input series with placeholders least-squares
                                 // filled on the residual (reported, never
                                 // asserted; collided exponents share one fit)
};

// Requires the trace to span >= 3 decades.  lambda is the evaluation value
// for per-mode series; leave at 1 for aggregated series.
ExpansionComparison compare(const ObservationTrace& trace,
                            const AsymptoticSeries& series, double lambda = 1.0);

}  // namespace fracsource
