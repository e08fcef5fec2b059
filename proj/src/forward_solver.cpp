#include "fracsource/forward_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fracsource/special_dd.hpp"
#include "fracsource/summation.hpp"

namespace fracsource {

namespace {

using gk15 = boost::math::quadrature::gauss_kronrod<double, 15>;
using gk31 = boost::math::quadrature::gauss_kronrod<double, 31>;

// sort + dedupe panel knots, relative tolerance on the full span
std::vector<double> clean_knots(std::vector<double> k, double lo, double hi) {
  k.push_back(lo);
  k.push_back(hi);
  std::sort(k.begin(), k.end());
  std::vector<double> out;
  const double tol = 1e-12 * (hi - lo);
  for (double v : k) {
    if (v < lo || v > hi) continue;
    if (!out.empty() && v - out.back() <= tol) continue;
    out.push_back(v);
  }
  if (out.size() < 2) out = {lo, hi};
  out.back() = hi;
  return out;
}

}  // namespace

int resolve_thread_cap() {
#ifdef _OPENMP
  if (const char* env = std::getenv("FRACSOURCE_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return std::min(v, 256);
  }
  return omp_get_max_threads();
#else
  return 1;
#endif
}

PsiEngine::PsiEngine(const FractionalOrder& order)
    : order_(order), fast_(order.alpha, order.alpha) {
  // lnGamma(alpha k + 1) cache: the power-series route for the step response
  // spends almost all its time here otherwise
  const int kmax = 4000;
  lgam_e1_.resize(kmax + 1);
  const dd a(order_.alpha);
  for (int k = 0; k <= kmax; ++k) {
    lgam_e1_[k] = lngamma_dd(a * static_cast<double>(k) + dd(1.0));
  }
}

dd PsiEngine::one_minus_e1_cached(double x) const {
  if (x == 0.0) return dd(0.0);
  const double r = std::pow(x, 1.0 / order_.alpha);
  if (r > 36.0) return one_minus_ml_e1_dd(order_.alpha, x);
  const dd lx = ln_dd(dd(x));
  dd sum(0.0), abssum(0.0);
  const int kmax = static_cast<int>(lgam_e1_.size()) - 1;
  for (int k = 1; k <= kmax; ++k) {
    const dd t = exp_dd(lx * static_cast<double>(k) - lgam_e1_[k]);
    if (k % 2 == 1) {
      sum = sum + t;
    } else {
      sum = sum - t;
    }
    abssum = abssum + t;
    if (k >= 4 && t.hi < 1e-35 * abssum.hi) return sum;
  }
  // cache exhausted (extremely small alpha): fall back to the slow path
  return one_minus_ml_e1_dd(order_.alpha, x);
}

double PsiEngine::step_response(double lambda, double s) const {
  if (!(lambda > 0.0)) throw std::invalid_argument("step_response: lambda must be > 0");
  if (!(s >= 0.0)) throw std::invalid_argument("step_response: s must be >= 0");
  if (s == 0.0) return 0.0;
  const double x = lambda * std::pow(s, order_.alpha);
  return to_double(one_minus_e1_cached(x)) / lambda;
}

double PsiEngine::psi_n(double lambda, const TemporalSource& mu, double t,
                        double rel_tol) const {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("psi_n: t must be finite and > 0");
  }
  if (!(lambda > 0.0)) throw std::invalid_argument("psi_n: lambda must be > 0");
  if (!(rel_tol >= 1e-13 && rel_tol <= 1e-2)) {
    throw std::invalid_argument("psi_n: rel_tol outside [1e-13, 1e-2]");
  }
  const double alpha = order_.alpha;
  const double inv_alpha = 1.0 / alpha;
  const double W = std::pow(t, alpha);

  // panel knots: kernel-knee decades in w, a geometric ladder against the
  // upper end (where the source argument varies fastest), and the images of
  // the source breakpoints
  std::vector<double> knots;
  for (int j = -9; j <= 9; ++j) {
    const double w = std::pow(10.0, j) / lambda;
    if (w > 0.0 && w < W) knots.push_back(w);
  }
  for (int j = 1; j <= 8; ++j) {
    knots.push_back(W * (1.0 - std::pow(10.0, -j)));
  }
  for (double b : mu.breakpoints()) {
    if (b < t && b >= 0.0) knots.push_back(std::pow(t - b, alpha));
  }
  for (const TemporalSource::Jump& jm : mu.jumps()) {
    if (jm.t < t && jm.t >= 0.0) knots.push_back(std::pow(t - jm.t, alpha));
  }
  const std::vector<double> k = clean_knots(std::move(knots), 0.0, W);

  auto f = [&](double w) {
    double s = t - std::pow(w, inv_alpha);
    if (s < 0.0) s = 0.0;  // rounding at the upper endpoint
    return fast_(lambda * w) * mu.mu_eval(s);
  };
  NeumaierSum acc;
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    if (k[i + 1] <= k[i]) continue;
    double err = 0.0;
    acc.add(gk15::integrate(f, k[i], k[i + 1], 12, rel_tol, &err));
  }
  return acc.total() * inv_alpha;
}

double PsiEngine::psi_n_highacc(double lambda, const TemporalSource& mu,
                                double t) const {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("psi_n_highacc: t must be finite and > 0");
  }
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("psi_n_highacc: lambda must be > 0");
  }
  const double alpha = order_.alpha;

  // boundary term of the integration by parts
  double psi = step_response(lambda, t) * mu.mu_eval(0.0);
  // jump corrections: a step of size delta at b contributes delta G(t - b)
  for (const TemporalSource::Jump& jm : mu.jumps()) {
    if (jm.t < t && jm.t > 0.0) {
      psi += jm.delta * step_response(lambda, t - jm.t);
    }
  }

  double lo_s = 0.0, hi_s = 0.0;
  mu.mu_prime_support(&lo_s, &hi_s);
  const double a = std::max(0.0, lo_s);
  const double b = std::min(t, hi_s);
  if (!(b > a)) return psi;

  // integrate in s (the source variable): mu' is evaluated at exact sample
  // points and only the benign G argument suffers the t - s rounding
  std::vector<double> knots;
  const double span = b - a;
  const bool singular_edge = (mu.family() == MuFamily::sub_gaussian);
  const int depth_lo = singular_edge ? 40 : 12;
  for (int j = 1; j <= depth_lo; ++j) {
    const double d = span * std::pow(10.0, -j);
    if (d <= 0.0) break;
    knots.push_back(a + d);
  }
  for (int j = 1; j <= 12; ++j) {
    knots.push_back(b - span * std::pow(10.0, -j));
  }
  // kernel knee tau = lambda^(-1/alpha) maps to s = t - tau 10^j
  const double tau_knee = std::pow(lambda, -1.0 / alpha);
  for (int j = -6; j <= 6; ++j) {
    const double s = t - tau_knee * std::pow(10.0, j);
    if (s > a && s < b) knots.push_back(s);
  }
  for (double bp : mu.breakpoints()) {
    if (bp > a && bp < b) knots.push_back(bp);
  }
  const std::vector<double> k = clean_knots(std::move(knots), a, b);

  auto f = [&](double s) {
    return step_response(lambda, t - s) * mu.mu_prime_eval(s);
  };
  NeumaierSum acc;
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    if (k[i + 1] <= k[i]) continue;
    double err = 0.0;
    acc.add(gk31::integrate(f, k[i], k[i + 1], 12, 1e-14, &err));
  }
  return psi + acc.total();
}

PsiTable build_psi_table_serial(const PsiEngine& engine,
                                const std::vector<double>& lambdas,
                                const TemporalSource& mu,
                                const std::vector<double>& times,
                                bool high_accuracy, double rel_tol) {
  PsiTable tab;
  tab.lambda = lambdas;
  tab.times = times;
  tab.value.resize(lambdas.size() * times.size());
  for (std::size_t n = 0; n < lambdas.size(); ++n) {
    for (std::size_t j = 0; j < times.size(); ++j) {
      tab.value[n * times.size() + j] =
          high_accuracy ? engine.psi_n_highacc(lambdas[n], mu, times[j])
                        : engine.psi_n(lambdas[n], mu, times[j], rel_tol);
    }
  }
  return tab;
}

PsiTable build_psi_table(const PsiEngine& engine,
                         const std::vector<double>& lambdas,
                         const TemporalSource& mu,
                         const std::vector<double>& times, bool high_accuracy,
                         bool parallel, double rel_tol) {
  for (double t : times) {
    if (!(t > 0.0)) throw std::invalid_argument("build_psi_table: times must be > 0");
  }
  for (double l : lambdas) {
    if (!(l > 0.0)) {
      throw std::invalid_argument("build_psi_table: eigenvalues must be > 0");
    }
  }
#ifdef _OPENMP
  if (parallel) {
    PsiTable tab;
    tab.lambda = lambdas;
    tab.times = times;
    tab.value.resize(lambdas.size() * times.size());
    const int nn = static_cast<int>(lambdas.size());
    const int tt = static_cast<int>(times.size());
    const int cap = resolve_thread_cap();
    // entries are independent; any schedule gives the identical table
#pragma omp parallel for collapse(2) schedule(dynamic) num_threads(cap)
    for (int n = 0; n < nn; ++n) {
      for (int j = 0; j < tt; ++j) {
        tab.value[static_cast<std::size_t>(n) * tt + j] =
            high_accuracy ? engine.psi_n_highacc(lambdas[n], mu, times[j])
                          : engine.psi_n(lambdas[n], mu, times[j], rel_tol);
      }
    }
    return tab;
  }
#else
  (void)parallel;
#endif
  return build_psi_table_serial(engine, lambdas, mu, times, high_accuracy,
                                rel_tol);
}

double eval_phi(const EigenSystem& eig, int n, double x0) {
  if (n < 0 || n >= static_cast<int>(eig.phi.size() + (eig.analytic ? 1 : 0)) ||
      static_cast<std::size_t>(n) >= eig.lambda.size()) {
    throw std::invalid_argument("eval_phi: mode index out of range");
  }
  if (!(x0 > 0.0) || !(x0 < eig.L)) {
    throw std::invalid_argument("eval_phi: x0 must lie inside (0, L)");
  }
  if (eig.analytic) {
    const double w = (n + 1) * 3.14159265358979323846 / eig.L;
    return std::sqrt(2.0 / eig.L) * std::sin(w * x0);
  }
  // cubic Lagrange through 4 consecutive nodes of the extended grid
  // (boundary zeros at 0 and L included)
  const int M = static_cast<int>(eig.x.size());
  const double g = x0 / eig.h;  // extended node k sits at x = k h, k=0..M+1
  int k0 = static_cast<int>(std::floor(g)) - 1;
  k0 = std::max(0, std::min(k0, M + 1 - 3));
  double result = 0.0;
  for (int i = 0; i < 4; ++i) {
    const int ki = k0 + i;
    const double vi =
        (ki == 0 || ki == M + 1) ? 0.0 : eig.phi[n][ki - 1];
    double w = 1.0;
    for (int jj = 0; jj < 4; ++jj) {
      if (jj == i) continue;
      w *= (g - (k0 + jj)) / static_cast<double>(ki - (k0 + jj));
    }
    result += w * vi;
  }
  return result;
}

ObservationTrace solve(const EigenSystem& eig, const std::vector<double>& f_grid,
                       const FractionalOrder& order, const TemporalSource& mu,
                       const ObservationSpec& obs, const SolveOptions& opts) {
  if (obs.times.empty()) throw std::invalid_argument("solve: no observation times");
  for (std::size_t i = 0; i + 1 < obs.times.size(); ++i) {
    if (!(obs.times[i] < obs.times[i + 1])) {
      throw std::invalid_argument("solve: times must be strictly increasing");
    }
  }
  const Projection pr = project(eig, f_grid);
  const int N = static_cast<int>(eig.lambda.size());

  // observation-weighted coefficients abar_n = a_n phi_n(x0)
  std::vector<double> abar(N);
  for (int n = 0; n < N; ++n) abar[n] = pr.coeffs[n] * eval_phi(eig, n, obs.x0);

  PsiEngine engine(order);
  const PsiTable tab = build_psi_table(engine, eig.lambda, mu, obs.times,
                                       opts.high_accuracy, opts.parallel,
                                       opts.quad_rel_tol);

  ObservationTrace tr;
  tr.x0 = obs.x0;
  tr.times = obs.times;
  tr.values.resize(obs.times.size());
  tr.tail_bound.resize(obs.times.size());
  for (std::size_t j = 0; j < obs.times.size(); ++j) {
    NeumaierSum s;
    for (int n = 0; n < N; ++n) s.add(abar[n] * tab.at(n, j));
    tr.values[j] = s.total();
  }

  // Truncation tail over the modes beyond the eigensystem. |psi_n| is
  // bounded by ||mu|| lambda^-1 exactly for alpha <= 1 (positive kernel) and
  // by 4 ||mu|| lambda^-1 max(1, log(1 + lambda t^alpha)) for alpha > 1;
  // eigenvalues beyond the system are extended along the fitted Weyl law.
  const double musup = mu.sup_abs();
  const double Kb = (order.alpha <= 1.0) ? 1.0 : 4.0;
  double c_w, s_w;
  if (N >= 20) {
    const WeylFit wf = weyl_check(eig);
    c_w = wf.c_lambda;
    s_w = wf.slope;
  } else {
    s_w = 2.0;
    c_w = eig.lambda[N - 1] / std::pow(static_cast<double>(N), 2.0);
  }
  if (s_w < 1.1) {
    tr.warnings.push_back(
        "eigenvalue growth fit is sub-linear; truncation tail bound not trusted");
    s_w = 1.1;
  }
  double amax_tail = 0.0;
  for (int n = std::max(0, N - std::max(1, N / 4)); n < N; ++n) {
    amax_tail = std::max(amax_tail, std::fabs(abar[n]));
  }
  const int M_ext = 100 * N;
  for (std::size_t j = 0; j < obs.times.size(); ++j) {
    const double ta = std::pow(obs.times[j], order.alpha);
    NeumaierSum B;
    for (int n = N + 1; n <= M_ext; ++n) {
      const double lam = c_w * std::pow(static_cast<double>(n), s_w);
      B.add(std::max(1.0, std::log1p(lam * ta)) / lam);
    }
    const double lamM = c_w * std::pow(static_cast<double>(M_ext), s_w);
    const double closure =
        (M_ext / lamM) * ((1.0 + std::log1p(lamM * ta)) / (s_w - 1.0) +
                          s_w / ((s_w - 1.0) * (s_w - 1.0)));
    tr.tail_bound[j] = Kb * musup * amax_tail * (B.total() + closure);
  }

  if (pr.parseval_defect > 0.2) {
    std::ostringstream msg;
    msg << "computed modes capture only " << (1.0 - pr.parseval_defect) * 100.0
        << "% of the source energy";
    tr.warnings.push_back(msg.str());
  }
  for (std::size_t j = 0; j < tr.values.size(); ++j) {
    if (tr.tail_bound[j] > 0.25 * std::fabs(tr.values[j])) {
      std::ostringstream msg;
      msg << "mode-truncation bound exceeds 25% of the signal at t = "
          << tr.times[j];
      tr.warnings.push_back(msg.str());
      break;
    }
  }
  return tr;
}

DecayProbe decay_probe(const ObservationTrace& trace) {
  const std::size_t n = trace.times.size();
  if (n < 12) {
    throw std::invalid_argument("decay_probe: need at least 12 samples");
  }
  if (!(trace.times.back() >= 1000.0 * trace.times.front() * (1.0 - 1e-12))) {
    throw std::invalid_argument("decay_probe: need at least 3 decades of time");
  }
  DecayProbe p;
  int last_sign = 0;
  std::size_t first_last_decade = n;
  const double t_edge = trace.times.back() / 10.0 * (1.0 - 1e-12);
  for (std::size_t i = 0; i < n; ++i) {
    if (trace.times[i] >= t_edge && first_last_decade == n) first_last_decade = i;
    const double v = trace.values[i];
    const int s = (v > 0.0) - (v < 0.0);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) {
      ++p.sign_changes;
      if (i >= first_last_decade) p.tail_single_signed = false;
    }
    last_sign = s;
  }
  // least-squares slope of log|u| against log t over the last decade
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = first_last_decade; i < n; ++i) {
    const double v = std::fabs(trace.values[i]);
    if (v <= 0.0) continue;
    const double lx = std::log(trace.times[i]);
    const double ly = std::log(v);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m >= 2) {
    p.last_decade_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  return p;
}

std::vector<double> make_geometric_times(double t_min, double t_max,
                                         int per_decade) {
  if (!(t_min > 0.0) || !(t_max > t_min)) {
    throw std::invalid_argument("make_geometric_times: need 0 < t_min < t_max");
  }
  if (per_decade < 1 || per_decade > 1000) {
    throw std::invalid_argument("make_geometric_times: per_decade out of range");
  }
  std::vector<double> v;
  for (int i = 0; i < 2000000; ++i) {
    const double t = t_min * std::pow(10.0, static_cast<double>(i) / per_decade);
    if (t >= t_max * (1.0 - 1e-12)) break;
    v.push_back(t);
  }
  v.push_back(t_max);
  return v;
}

}  // namespace fracsource
