#pragma once
// Source reconstruction from long-time observation tails. The pipeline is:
//
//   fit_tail         trace -> coefficients of the inverse-power(+log) basis
//   moments_from_fit pure-tail coefficients -> spectral moments A_g
//   recover_spatial  moments -> mode coefficients a_n (capped Vandermonde)
//   recover_temporal log/plain mixed coefficients -> mu_j and c_{mu,m}
//   estimate_kappa   paired traces -> proportionality constant + verdict
//
// Every fit reports its conditioning: these problems are uniqueness-only,
// and the finite-window bases are near-collinear by nature. Results above
// the condition threshold are flagged, never silently dropped.

#include <string>
#include <vector>

#include "fracsource/asymptotic_engine.hpp"
#include "fracsource/forward_solver.hpp"
#include "fracsource/fractional_order.hpp"

namespace fracsource {

// What the caller knows about the source tail mu ~ mu_0 + sum_j mu_j t^-j;
// the fit basis is pruned accordingly (a smaller honest basis conditions
// far better than the full one).
enum class SourceStructure {
  constant_mu,    // mu_j = 0 for j >= 1 (level mu_0 unknown)
  power_tail_mu,  // mu_0 = 0, power tail present (e.g. ~A/t)
  all_mu_zero,    // every mu_j including mu_0 vanishes (fast decay)
  general_mu,     // nothing known: full basis, conditioning suffers
};

struct BasisTerm {
  double t_power = 0.0;
  bool has_log = false;
};

struct TailFit {
  std::vector<BasisTerm> basis;      // distinct exponents after collection
  std::vector<double> coefficients;  // one per basis term
  double residual_norm = 0.0;
  double conditioning = 0.0;
  bool trusted = true;  // false when conditioning exceeds the threshold
};

// Least squares of trace values against the structure-pruned basis
// {1, t^{-l_k a}, t^{-l_k a - j}, t^{-l_k a - j} log t, t^{-i}} with
// k <= K, j <= J and total decay capped at J + 1/2. Rows are weighted
// relative to the trace magnitude. Requires >= 3 decades of samples.
TailFit fit_tail(const ObservationTrace& trace, const FractionalOrder& alpha,
                 SourceStructure structure, int K, int J);

// Read spectral moments off the pure-tail coefficients of a constant-mu fit:
// coeff(t^{-l_k a}) = (-1)^{l_k} rgamma(1 - l_k a) mu0 A_{l_k}.
SpectralMoments moments_from_fit(const TailFit& fit,
                                 const FractionalOrder& alpha, double mu0);

struct SpatialRecovery {
  std::vector<double> a;      // recovered mode coefficients
  double conditioning = 0.0;  // of the final (possibly reduced) solve
  int recovered_modes = 0;
  bool partial = false;  // true when modes were dropped to restore conditioning
};

// Invert A_g = sum_n a_n lambda_n^{-g-1} for the a_n, double-double
// throughout. The mode count is capped (conditioning degrades geometrically)
// and reduced further if the condition estimate exceeds the threshold.
SpatialRecovery recover_spatial(const SpectralMoments& moments,
                                const std::vector<double>& lambdas,
                                int max_modes = 8);

struct TemporalRecovery {
  // index j; NaN where the basis carried no information
  std::vector<double> mu_j;
  std::vector<double> mu_j_spread;  // disagreement across the usable k
  // index m = j - 1
  std::vector<double> c_mu;
  std::vector<double> c_mu_halfwidth;
  // true when the fitted structure forces the unspecified cross constants to
  // zero (all-mu_j-zero pattern), making c_mu point estimates rather than
  // interval centers
  bool c_mu_is_explicit = false;
};

// Divide the fitted mixed-term coefficients by their known structural
// factors and the spectral moments of the KNOWN weighted source (abar_n =
// a_n phi_n(x0)). Throws when every usable moment vanishes: the observation
// point then sits on nodes of every contributing mode and the trace is blind
// to mu.
TemporalRecovery recover_temporal(const TailFit& fit,
                                  const std::vector<double>& abar,
                                  const std::vector<double>& lambdas,
                                  const FractionalOrder& alpha, int K, int J);

struct KappaEstimate {
  double kappa = 0.0;
  double spread = 0.0;  // max deviation of per-coefficient estimates
  bool proportional = false;
  std::vector<double> ratios;  // raw matched-coefficient ratios (diagnostic)
};

// Certify or refute the proportionality structure between two traces with
// persistent sources, then calibrate kappa through the known weighted
// sources. Requires a presumed-irrational order (the uniqueness hypothesis).
KappaEstimate estimate_kappa(const ObservationTrace& trace1,
                             const ObservationTrace& trace2,
                             const FractionalOrder& alpha,
                             const std::vector<double>& abar1,
                             const std::vector<double>& abar2,
                             const std::vector<double>& lambdas, int K);

// Additive Gaussian perturbation, sigma_rel relative to the largest |value|;
// for robustness experiments only, never applied by default.
ObservationTrace with_noise(const ObservationTrace& trace, double sigma_rel,
                            unsigned long long seed);

}  // namespace fracsource
