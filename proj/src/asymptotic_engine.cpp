#include "fracsource/asymptotic_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracsource/special_dd.hpp"
#include "fracsource/summation.hpp"

namespace fracsource {

namespace {

constexpr double kPowTol = 1e-9;  // exponent-collision tolerance

bool same_key(const ExpansionTerm& a, const ExpansionTerm& b) {
  return a.has_log == b.has_log &&
         std::fabs(a.t_power - b.t_power) <= kPowTol &&
         std::fabs(a.lambda_power - b.lambda_power) <= kPowTol;
}

// generalized binomial coefficient binom(x, j) as a finite product
double binom_real(double x, int j) {
  double p = 1.0;
  for (int i = 0; i < j; ++i) p *= (x - i) / (i + 1);
  return p;
}

}  // namespace

double pure_term_factor(double alpha, int l) {
  const double sign = (l % 2 == 0) ? 1.0 : -1.0;
  return sign * rgamma(1.0 - l * alpha);
}

double mixed_term_factor(double alpha, int l, int j) {
  const double la = l * alpha;
  const double sign = ((l - 1 + j) % 2 == 0) ? 1.0 : -1.0;
  return sign * rgamma(-la) * binom_real(-la - 1.0, j - 1);
}

namespace {

// sort descending t_power (tie: lambda_power, then plain before log),
// merge equal keys, drop explicit terms whose coefficient vanished
void collect(std::vector<ExpansionTerm>& terms) {
  std::sort(terms.begin(), terms.end(),
            [](const ExpansionTerm& a, const ExpansionTerm& b) {
              if (a.t_power != b.t_power) return a.t_power > b.t_power;
              if (a.lambda_power != b.lambda_power) {
                return a.lambda_power > b.lambda_power;
              }
              return a.has_log < b.has_log;
            });
  std::vector<ExpansionTerm> out;
  for (const ExpansionTerm& t : terms) {
    if (!out.empty() && same_key(out.back(), t)) {
      out.back().coeff += t.coeff;
      out.back().is_explicit = out.back().is_explicit && t.is_explicit;
    } else {
      out.push_back(t);
    }
  }
  terms.clear();
  for (const ExpansionTerm& t : out) {
    if (t.is_explicit && t.coeff == 0.0) continue;
    terms.push_back(t);
  }
}

std::vector<ExpansionTerm> emit_terms(const FractionalOrder& order,
                                      const TemporalSource& src, int N) {
  if (N < 1 || N > 40) {
    throw std::invalid_argument("expansion: remainder order must be in [1, 40]");
  }
  const double a = order.alpha;
  const int J = 3 * N;  // smallest J with (J+1)/3 > N

  // enough l_k that alpha * l_k passes N: l_k >= k
  const int count = static_cast<int>(std::ceil(N / a)) + 2;
  const std::vector<int> lk = lk_sequence(order, count);

  const double mu0 = src.mu_coeff(0);
  bool all_muj_zero = true;
  std::vector<double> muj(J + 1, 0.0);
  for (int j = 1; j <= J; ++j) {
    muj[j] = src.mu_coeff(j);
    if (muj[j] != 0.0) all_muj_zero = false;
  }
  std::vector<double> cmu(J, 0.0);
  for (int j = 1; j <= J; ++j) {
    if (j > N) break;  // filtered below anyway
    cmu[j - 1] = src.c_mu(j - 1).value;
  }

  std::vector<ExpansionTerm> terms;
  if (mu0 != 0.0) {
    terms.push_back({mu0, -1.0, 0.0, false, true});
  }
  for (int l : lk) {
    const double la = static_cast<double>(l) * a;
    if (la > N) break;
    // pure fractional tail of the level term
    if (mu0 != 0.0) {
      const double c = mu0 * pure_term_factor(a, l);
      terms.push_back({c, -static_cast<double>(l) - 1.0, -la, false, true});
    }
    // mixed terms against the decaying part of the source
    for (int j = 1; j <= J; ++j) {
      const double tp = -(la + j);
      if (tp <= -static_cast<double>(N)) break;
      const double base = mixed_term_factor(a, l, j);
      const double lp = -static_cast<double>(l) - 1.0;
      if (muj[j] != 0.0) {
        terms.push_back({base * muj[j], lp, tp, true, true});
      }
      const double cc = base * cmu[j - 1];
      if (cc != 0.0 || !all_muj_zero) {
        // the constant companion also carries a structural piece that
        // vanishes only when every mu_j is zero
        terms.push_back({cc, lp, tp, false, all_muj_zero});
      }
    }
  }
  // integer-exponent placeholders, present only alongside nonzero mu_j
  if (!all_muj_zero) {
    for (int j = 1; j <= J; ++j) {
      for (int m = 0; j + m < N; ++m) {
        terms.push_back({0.0, -1.0 - m / a, -static_cast<double>(j + m), false,
                         false});
      }
    }
  }
  collect(terms);
  return terms;
}

}  // namespace

SpectralMoments spectral_moments(const std::vector<double>& a,
                                 const std::vector<double>& lambdas,
                                 const std::vector<double>& gammas) {
  if (a.size() != lambdas.size()) {
    throw std::invalid_argument("spectral_moments: size mismatch");
  }
  SpectralMoments mom;
  mom.gammas = gammas;
  mom.values.reserve(gammas.size());
  for (double g : gammas) {
    NeumaierSum s;
    for (std::size_t n = 0; n < a.size(); ++n) {
      s.add(a[n] * std::pow(lambdas[n], -g - 1.0));
    }
    mom.values.push_back(s.total());
  }
  return mom;
}

AsymptoticSeries expansion_psi(const FractionalOrder& alpha, double lambda,
                               const TemporalSource& src, int N) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("expansion_psi: lambda must be > 0");
  }
  AsymptoticSeries s;
  s.order_N = N;
  s.terms = emit_terms(alpha, src, N);
  return s;
}

AsymptoticSeries expansion_sum(const std::vector<double>& a,
                               const std::vector<double>& lambdas,
                               const FractionalOrder& alpha,
                               const TemporalSource& src, int N) {
  if (a.empty() || a.size() != lambdas.size()) {
    throw std::invalid_argument("expansion_sum: need matching nonempty a, lambda");
  }
  NeumaierSum conv;
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (!(lambdas[n] > 0.0)) {
      throw std::invalid_argument("expansion_sum: eigenvalues must be > 0");
    }
    conv.add(std::fabs(a[n]) / lambdas[n] * std::log1p(lambdas[n]));
  }
  if (!std::isfinite(conv.total())) {
    throw std::invalid_argument(
        "expansion_sum: weighted coefficient sum is not finite");
  }

  AsymptoticSeries s;
  s.order_N = N;
  s.terms = emit_terms(alpha, src, N);
  // fold each lambda power through the corresponding spectral moment
  for (ExpansionTerm& t : s.terms) {
    NeumaierSum m;
    for (std::size_t n = 0; n < a.size(); ++n) {
      m.add(a[n] * std::pow(lambdas[n], t.lambda_power));
    }
    t.coeff *= m.total();
    t.lambda_power = 0.0;
  }
  // placeholders keep coeff 0 but their moment factor is gone; fold is a
  // no-op for them. Integer exponents from different (j, m) pairs now share
  // keys, so collect again.
  collect(s.terms);
  return s;
}

double series_value(const AsymptoticSeries& s, double lambda, double t) {
  if (!(t > 0.0) || !(lambda > 0.0)) {
    throw std::invalid_argument("series_value: need lambda > 0 and t > 0");
  }
  const double lt = std::log(t);
  NeumaierSum v;
  for (const ExpansionTerm& term : s.terms) {
    double x = term.coeff * std::pow(lambda, term.lambda_power) *
               std::pow(t, term.t_power);
    if (term.has_log) x *= lt;
    v.add(x);
  }
  return v.total();
}

ExpansionComparison compare(const ObservationTrace& trace,
                            const AsymptoticSeries& series, double lambda) {
  const std::size_t n = trace.times.size();
  if (n != trace.values.size() || n < 4) {
    throw std::invalid_argument("compare: malformed or too-short trace");
  }
  if (!(trace.times.back() >= 1000.0 * trace.times.front() * (1.0 - 1e-12))) {
    throw std::invalid_argument("compare: trace must span >= 3 decades");
  }

  ExpansionComparison cmp;
  cmp.fitted = series;

  // residual of the stored series (placeholders contribute their current
  // coefficients, normally zero)
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = trace.values[i] - series_value(series, lambda, trace.times[i]);
  }

  // least-squares fill of the placeholder coefficients; exponent groups that
  // coincide as functions of t are fitted as one column, the correction
  // landing on the group's first term
  std::vector<std::size_t> lead;  // index of the fitted term per column
  std::vector<std::vector<double>> cols;
  for (std::size_t k = 0; k < cmp.fitted.terms.size(); ++k) {
    const ExpansionTerm& term = cmp.fitted.terms[k];
    if (term.is_explicit) continue;
    bool grouped = false;
    for (std::size_t c = 0; c < lead.size(); ++c) {
      const ExpansionTerm& other = cmp.fitted.terms[lead[c]];
      if (other.has_log == term.has_log &&
          std::fabs(other.t_power - term.t_power) <= kPowTol) {
        grouped = true;
        break;
      }
    }
    if (grouped) continue;
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) {
      col[i] = std::pow(lambda, term.lambda_power) *
               std::pow(trace.times[i], term.t_power);
      if (term.has_log) col[i] *= std::log(trace.times[i]);
    }
    lead.push_back(k);
    cols.push_back(std::move(col));
  }
  if (!cols.empty() && n >= cols.size()) {
    // modified Gram-Schmidt on the (small) design matrix
    const std::size_t m = cols.size();
    std::vector<std::vector<double>> q = cols;
    std::vector<std::vector<double>> R(m, std::vector<double>(m, 0.0));
    bool ok = true;
    for (std::size_t j = 0; j < m && ok; ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        double d = 0.0;
        for (std::size_t s = 0; s < n; ++s) d += q[i][s] * q[j][s];
        R[i][j] = d;
        for (std::size_t s = 0; s < n; ++s) q[j][s] -= d * q[i][s];
      }
      double nrm = 0.0;
      for (std::size_t s = 0; s < n; ++s) nrm += q[j][s] * q[j][s];
      nrm = std::sqrt(nrm);
      if (!(nrm > 1e-250)) {
        ok = false;
        break;
      }
      R[j][j] = nrm;
      for (std::size_t s = 0; s < n; ++s) q[j][s] /= nrm;
    }
    if (ok) {
      std::vector<double> qtr(m, 0.0), x(m, 0.0);
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t s = 0; s < n; ++s) qtr[j] += q[j][s] * r[s];
      }
      for (std::size_t j = m; j-- > 0;) {
        double v = qtr[j];
        for (std::size_t i = j + 1; i < m; ++i) v -= R[j][i] * x[i];
        x[j] = v / R[j][j];
      }
      for (std::size_t c = 0; c < m; ++c) {
        cmp.fitted.terms[lead[c]].coeff += x[c];
        for (std::size_t s = 0; s < n; ++s) r[s] -= x[c] * cols[c][s];
      }
    }
  }

  cmp.residual.resize(n);
  for (std::size_t i = 0; i < n; ++i) cmp.residual[i] = std::fabs(r[i]);

  // log-log slope of the surviving residual
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m_used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(cmp.residual[i] > 0.0)) continue;
    const double lx = std::log(trace.times[i]);
    const double ly = std::log(cmp.residual[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m_used;
  }
  if (m_used >= 2) {
    cmp.remainder_slope = (m_used * sxy - sx * sy) / (m_used * sxx - sx * sx);
  }
  return cmp;
}

}  // namespace fracsource
