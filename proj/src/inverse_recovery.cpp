#include "fracsource/inverse_recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "fracsource/linalg_dd.hpp"
#include "fracsource/special_dd.hpp"
#include "fracsource/summation.hpp"

namespace fracsource {

namespace {

constexpr double kCondThreshold = 1e16;  // dd keeps ~16 digits past this
constexpr double kPowTol = 1e-9;

const double kNaN = std::numeric_limits<double>::quiet_NaN();

// lambda^e in double-double for exponents far outside double comfort
dd pow_dd(double lambda, double e) {
  if (lambda == 1.0 || e == 0.0) return dd(1.0);
  return exp_dd(ln_dd(dd(lambda)) * e);
}

void check_window(const ObservationTrace& trace) {
  const std::size_t n = trace.times.size();
  if (n != trace.values.size() || n < 8) {
    throw std::invalid_argument("fit_tail: malformed or too-short trace");
  }
  if (!(trace.times.back() >= 1000.0 * trace.times.front() * (1.0 - 1e-12))) {
    throw std::invalid_argument("fit_tail: trace must span >= 3 decades");
  }
}

void push_unique(std::vector<BasisTerm>& basis, double t_power, bool has_log) {
  for (const BasisTerm& b : basis) {
    if (b.has_log == has_log && std::fabs(b.t_power - t_power) <= kPowTol) {
      return;
    }
  }
  basis.push_back({t_power, has_log});
}

// mean of a nonempty sample; *spread gets the largest deviation from it
double mean_and_spread(const std::vector<double>& v, double* spread) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double dev = 0.0;
  for (double x : v) dev = std::max(dev, std::fabs(x - mean));
  *spread = dev;
  return mean;
}

}  // namespace

TailFit fit_tail(const ObservationTrace& trace, const FractionalOrder& alpha,
                 SourceStructure structure, int K, int J) {
  check_window(trace);
  if (K < 1 || K > 16 || J < 0 || J > 16) {
    throw std::invalid_argument("fit_tail: K in [1,16] and J in [0,16] required");
  }
  const double a = alpha.alpha;
  const std::vector<int> lk = lk_sequence(alpha, K);
  const double cutoff = J + 0.5;  // deepest total decay admitted to the basis

  std::vector<BasisTerm> basis;
  const bool want_const = structure == SourceStructure::constant_mu ||
                          structure == SourceStructure::power_tail_mu ||
                          structure == SourceStructure::general_mu;
  const bool want_pure = structure == SourceStructure::constant_mu ||
                         structure == SourceStructure::general_mu;
  const bool want_integer = structure == SourceStructure::power_tail_mu ||
                            structure == SourceStructure::general_mu;
  const bool want_mixed = structure != SourceStructure::constant_mu;
  const bool want_logs = structure == SourceStructure::power_tail_mu ||
                         structure == SourceStructure::general_mu;
  if (want_const) push_unique(basis, 0.0, false);
  if (want_pure) {
    for (int l : lk) push_unique(basis, -(l * a), false);
  }
  if (want_integer) {
    for (int i = 1; i <= J; ++i) push_unique(basis, -static_cast<double>(i), false);
  }
  if (want_mixed) {
    for (int l : lk) {
      for (int j = 1; j <= J; ++j) {
        const double p = l * a + j;
        if (p > cutoff) break;
        push_unique(basis, -p, false);
        if (want_logs) push_unique(basis, -p, true);
      }
    }
  }
  std::sort(basis.begin(), basis.end(), [](const BasisTerm& x, const BasisTerm& y) {
    if (x.t_power != y.t_power) return x.t_power > y.t_power;
    return x.has_log < y.has_log;
  });
  if (basis.empty()) {
    throw std::invalid_argument("fit_tail: structure/K/J produced an empty basis");
  }
  const std::size_t n = trace.times.size();
  if (basis.size() > n) {
    throw std::invalid_argument("fit_tail: more basis terms than samples");
  }

  // relative row weights: tails die over the window, so absolute weighting
  // would let the early samples drown the information-bearing late ones
  double vmax = 0.0;
  for (double v : trace.values) vmax = std::max(vmax, std::fabs(v));
  std::vector<double> w(n, 1.0);
  if (vmax > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 1.0 / (std::fabs(trace.values[i]) + 1e-15 * vmax);
    }
  }

  std::vector<std::vector<dd>> cols(basis.size(), std::vector<dd>(n));
  std::vector<dd> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const dd lt = ln_dd(dd(trace.times[i]));
    b[i] = dd(trace.values[i]);
    for (std::size_t c = 0; c < basis.size(); ++c) {
      dd v = exp_dd(lt * basis[c].t_power);
      if (basis[c].has_log) v *= lt;
      cols[c][i] = v;
    }
  }
  const LsSolution sol = solve_ls_dd(cols, b, w);

  TailFit fit;
  fit.basis = basis;
  fit.coefficients = sol.x;
  fit.residual_norm = sol.residual_norm;
  fit.conditioning = sol.conditioning;
  fit.trusted = std::isfinite(sol.conditioning) && sol.conditioning <= kCondThreshold;
  return fit;
}

SpectralMoments moments_from_fit(const TailFit& fit,
                                 const FractionalOrder& alpha, double mu0) {
  if (mu0 == 0.0) {
    throw std::invalid_argument(
        "moments_from_fit: pure-tail coefficients scale with mu0, need mu0 != 0");
  }
  const double a = alpha.alpha;
  const std::vector<int> lk = lk_sequence(alpha, 64);
  SpectralMoments mom;
  for (std::size_t c = 0; c < fit.basis.size(); ++c) {
    if (fit.basis[c].has_log || !(fit.basis[c].t_power < 0.0)) continue;
    for (int l : lk) {
      if (std::fabs(fit.basis[c].t_power + l * a) <= kPowTol) {
        mom.gammas.push_back(static_cast<double>(l));
        mom.values.push_back(fit.coefficients[c] /
                             (pure_term_factor(a, l) * mu0));
        break;
      }
    }
  }
  return mom;
}

SpatialRecovery recover_spatial(const SpectralMoments& moments,
                                const std::vector<double>& lambdas,
                                int max_modes) {
  const std::size_t K = moments.gammas.size();
  if (K == 0 || K != moments.values.size()) {
    throw std::invalid_argument("recover_spatial: empty or malformed moments");
  }
  if (lambdas.empty()) {
    throw std::invalid_argument("recover_spatial: no eigenvalues");
  }
  for (std::size_t i = 0; i + 1 < lambdas.size(); ++i) {
    if (!(lambdas[i] < lambdas[i + 1])) {
      throw std::invalid_argument("recover_spatial: eigenvalues must increase");
    }
  }
  if (max_modes < 1) max_modes = 1;
  const int n_req = static_cast<int>(
      std::min<std::size_t>(lambdas.size(), static_cast<std::size_t>(max_modes)));

  std::vector<dd> b(K);
  for (std::size_t i = 0; i < K; ++i) b[i] = dd(moments.values[i]);

  SpatialRecovery out;
  int N = std::min<int>(n_req, static_cast<int>(K));
  while (true) {
    std::vector<std::vector<dd>> cols(N, std::vector<dd>(K));
    for (int nn = 0; nn < N; ++nn) {
      for (std::size_t i = 0; i < K; ++i) {
        cols[nn][i] = pow_dd(lambdas[nn], -moments.gammas[i] - 1.0);
      }
    }
    const LsSolution sol = solve_ls_dd(cols, b);
    if ((std::isfinite(sol.conditioning) && sol.conditioning <= kCondThreshold) ||
        N == 1) {
      out.a = sol.x;
      out.conditioning = sol.conditioning;
      out.recovered_modes = N;
      out.partial = N < n_req;
      return out;
    }
    --N;  // drop the worst-resolved trailing mode and retry
  }
}

TemporalRecovery recover_temporal(const TailFit& fit,
                                  const std::vector<double>& abar,
                                  const std::vector<double>& lambdas,
                                  const FractionalOrder& alpha, int K, int J) {
  if (abar.empty() || abar.size() != lambdas.size()) {
    throw std::invalid_argument("recover_temporal: need matching abar, lambdas");
  }
  if (K < 1 || K > 16 || J < 1 || J > 16) {
    throw std::invalid_argument("recover_temporal: K, J out of range");
  }
  const double a = alpha.alpha;
  const std::vector<int> lk = lk_sequence(alpha, K);

  // moments of the known weighted source, with a no-cancellation scale to
  // decide which are genuinely nonzero
  std::vector<double> A(lk.size()), usable_scale(lk.size());
  std::vector<bool> usable(lk.size());
  bool any_usable = false;
  for (std::size_t k = 0; k < lk.size(); ++k) {
    NeumaierSum s, sa;
    for (std::size_t n = 0; n < abar.size(); ++n) {
      const double p = std::pow(lambdas[n], -static_cast<double>(lk[k]) - 1.0);
      s.add(abar[n] * p);
      sa.add(std::fabs(abar[n]) * p);
    }
    A[k] = s.total();
    usable_scale[k] = sa.total();
    usable[k] = std::fabs(A[k]) > 1e-10 * usable_scale[k] && A[k] != 0.0;
    any_usable = any_usable || usable[k];
  }
  if (!any_usable) {
    throw std::runtime_error(
        "recover_temporal: every spectral moment of the weighted source "
        "vanishes - the observation point sits on nodes of all contributing "
        "modes (blind spot), so the trace carries no temporal information");
  }
  NeumaierSum s0;
  for (std::size_t n = 0; n < abar.size(); ++n) s0.add(abar[n] / lambdas[n]);
  const double A0 = s0.total();

  TemporalRecovery out;
  out.mu_j.assign(J + 1, kNaN);
  out.mu_j_spread.assign(J + 1, 0.0);
  out.c_mu.assign(J, kNaN);
  out.c_mu_halfwidth.assign(J, 0.0);
  out.c_mu_is_explicit = true;
  for (const BasisTerm& bt : fit.basis) {
    if (bt.has_log) out.c_mu_is_explicit = false;
  }

  // level coefficient: constant basis term over A_0
  for (std::size_t c = 0; c < fit.basis.size(); ++c) {
    if (!fit.basis[c].has_log && fit.basis[c].t_power == 0.0) {
      if (A0 != 0.0) out.mu_j[0] = fit.coefficients[c] / A0;
    }
  }

  for (int j = 1; j <= J; ++j) {
    std::vector<double> mu_ests, c_ests;
    for (std::size_t k = 0; k < lk.size(); ++k) {
      if (!usable[k]) continue;
      const double p = lk[k] * a + j;
      const double denom = mixed_term_factor(a, lk[k], j) * A[k];
      if (denom == 0.0) continue;
      for (std::size_t c = 0; c < fit.basis.size(); ++c) {
        if (std::fabs(fit.basis[c].t_power + p) > kPowTol) continue;
        if (fit.basis[c].has_log) {
          mu_ests.push_back(fit.coefficients[c] / denom);
        } else {
          c_ests.push_back(fit.coefficients[c] / denom);
        }
      }
    }
    if (!mu_ests.empty()) {
      double spread = 0.0;
      out.mu_j[j] = mean_and_spread(mu_ests, &spread);
      out.mu_j_spread[j] = spread;
    }
    if (!c_ests.empty()) {
      double spread = 0.0;
      out.c_mu[j - 1] = mean_and_spread(c_ests, &spread);
      out.c_mu_halfwidth[j - 1] = spread;
    }
  }
  return out;
}

KappaEstimate estimate_kappa(const ObservationTrace& trace1,
                             const ObservationTrace& trace2,
                             const FractionalOrder& alpha,
                             const std::vector<double>& abar1,
                             const std::vector<double>& abar2,
                             const std::vector<double>& lambdas, int K) {
  if (alpha.rational) {
    throw std::invalid_argument(
        "estimate_kappa: proportionality certification requires a "
        "presumed-irrational order (rational orders admit counterexamples)");
  }
  if (abar1.size() != lambdas.size() || abar2.size() != lambdas.size() ||
      lambdas.empty()) {
    throw std::invalid_argument("estimate_kappa: coefficient/eigenvalue mismatch");
  }
  const TailFit fit1 = fit_tail(trace1, alpha, SourceStructure::constant_mu, K, 0);
  const TailFit fit2 = fit_tail(trace2, alpha, SourceStructure::constant_mu, K, 0);
  // identical structure and K give positionally aligned bases
  const std::size_t m = fit1.basis.size();

  double s1 = 0.0, s2 = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    s1 = std::max(s1, std::fabs(fit1.coefficients[c]));
    s2 = std::max(s2, std::fabs(fit2.coefficients[c]));
  }

  const std::vector<int> lk = lk_sequence(alpha, K);
  KappaEstimate out;
  std::vector<double> kappas;
  for (std::size_t c = 0; c < m; ++c) {
    const double c1 = fit1.coefficients[c];
    const double c2 = fit2.coefficients[c];
    if (!(std::fabs(c1) > 1e-12 * s1) || !(std::fabs(c2) > 1e-12 * s2)) continue;
    // moment exponent of this basis term: gamma = 0 for the constant,
    // l_k for the pure tail t^{-l_k a}
    double gamma = 0.0;
    if (fit1.basis[c].t_power < 0.0) {
      bool found = false;
      for (int l : lk) {
        if (std::fabs(fit1.basis[c].t_power + l * alpha.alpha) <= kPowTol) {
          gamma = static_cast<double>(l);
          found = true;
          break;
        }
      }
      if (!found) continue;
    }
    NeumaierSum m1, m2;
    for (std::size_t n = 0; n < lambdas.size(); ++n) {
      const double p = std::pow(lambdas[n], -gamma - 1.0);
      m1.add(abar1[n] * p);
      m2.add(abar2[n] * p);
    }
    if (m2.total() == 0.0 || m1.total() == 0.0) continue;
    const double r = c2 / c1;
    out.ratios.push_back(r);
    kappas.push_back(r * m1.total() / m2.total());
  }

  if (out.ratios.size() < 2) {
    out.proportional = false;
    out.spread = std::numeric_limits<double>::infinity();
    out.kappa = kappas.empty() ? kNaN : kappas[0];
    return out;
  }
  double rdev = 0.0;
  const double rmean = mean_and_spread(out.ratios, &rdev);
  out.proportional = rmean != 0.0 && rdev <= 0.05 * std::fabs(rmean);

  double kdev = 0.0;
  out.kappa = mean_and_spread(kappas, &kdev);
  out.spread = kdev;
  return out;
}

ObservationTrace with_noise(const ObservationTrace& trace, double sigma_rel,
                            unsigned long long seed) {
  if (!(sigma_rel >= 0.0)) {
    throw std::invalid_argument("with_noise: sigma_rel must be >= 0");
  }
  ObservationTrace out = trace;
  double vmax = 0.0;
  for (double v : trace.values) vmax = std::max(vmax, std::fabs(v));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma_rel * vmax);
  for (double& v : out.values) v += gauss(rng);
  out.warnings.push_back("synthetic gaussian noise applied");
  return out;
}

}  // namespace fracsource
