#include "fracsource/spectral_operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "fracsource/summation.hpp"

namespace fracsource {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Solve (T - shift) y = rhs for a symmetric tridiagonal T, no pivoting.
// Near-singular pivots are nudged: inverse iteration wants the growth.
void shifted_thomas(const std::vector<double>& diag,
                    const std::vector<double>& sub, double shift,
                    std::vector<double>* y) {
  const int m = static_cast<int>(diag.size());
  std::vector<double> c(m), d(*y);
  double piv = diag[0] - shift;
  if (std::fabs(piv) < 1e-300) piv = 1e-300;
  c[0] = sub.empty() ? 0.0 : sub[0] / piv;
  d[0] /= piv;
  for (int i = 1; i < m; ++i) {
    piv = (diag[i] - shift) - sub[i - 1] * c[i - 1];
    if (std::fabs(piv) < 1e-300) piv = 1e-300;
    if (i < m - 1) c[i] = sub[i] / piv;
    d[i] = (d[i] - sub[i - 1] * d[i - 1]) / piv;
  }
  (*y)[m - 1] = d[m - 1];
  for (int i = m - 2; i >= 0; --i) (*y)[i] = d[i] - c[i] * (*y)[i + 1];
}

double norm_h(const std::vector<double>& v, double h) {
  NeumaierSum s;
  for (double vi : v) s.add(vi * vi);
  return std::sqrt(h * s.total());
}

}  // namespace

SpectralOperator SpectralOperator::laplacian(double L) {
  if (!(L > 0.0)) throw std::invalid_argument("laplacian: L must be > 0");
  SpectralOperator op;
  op.L = L;
  op.a = [](double) { return 1.0; };
  op.q = [](double) { return 0.0; };
  op.analytic = true;
  return op;
}

SpectralOperator SpectralOperator::variable(double L,
                                            std::function<double(double)> a,
                                            std::function<double(double)> q) {
  if (!(L > 0.0)) throw std::invalid_argument("variable: L must be > 0");
  SpectralOperator op;
  op.L = L;
  op.a = std::move(a);
  op.q = std::move(q);
  op.analytic = false;
  return op;
}

EigenSystem eigensolve(const SpectralOperator& op, int n_modes, int grid_size) {
  if (n_modes < 1) throw std::invalid_argument("eigensolve: n_modes must be >= 1");
  if (grid_size < 2 * n_modes) {
    throw std::invalid_argument(
        "eigensolve: grid_size must be at least 2 * n_modes");
  }
  const int M = grid_size;
  EigenSystem eig;
  eig.L = op.L;
  eig.h = op.L / (M + 1);
  eig.analytic = op.analytic;
  eig.a0 = op.a(0.0);
  eig.x.resize(M);
  for (int i = 0; i < M; ++i) eig.x[i] = (i + 1) * eig.h;

  if (op.analytic) {
    // exact eigenpairs of -u'' with Dirichlet ends, sampled on the grid
    const double norm = std::sqrt(2.0 / op.L);
    eig.lambda.resize(n_modes);
    eig.phi.assign(n_modes, std::vector<double>(M));
    for (int n = 1; n <= n_modes; ++n) {
      const double w = n * kPi / op.L;
      eig.lambda[n - 1] = w * w;
      for (int i = 0; i < M; ++i) eig.phi[n - 1][i] = norm * std::sin(w * eig.x[i]);
    }
    return eig;
  }

  // conservative flux form: A_ii = (a_{i-1/2} + a_{i+1/2})/h^2 + q_i,
  // A_{i,i+1} = -a_{i+1/2}/h^2
  const double h = eig.h;
  std::vector<double> ahalf(M + 1);
  for (int i = 0; i <= M; ++i) {
    const double xm = (i + 0.5) * h;
    ahalf[i] = op.a(xm);
    if (!(ahalf[i] > 0.0)) {
      std::ostringstream msg;
      msg << "eigensolve: diffusivity a(x) must be > 0, got " << ahalf[i]
          << " at x = " << xm;
      throw std::invalid_argument(msg.str());
    }
  }
  eig.diag.resize(M);
  eig.sub.resize(M - 1);
  const double ih2 = 1.0 / (h * h);
  for (int i = 0; i < M; ++i) {
    const double qi = op.q(eig.x[i]);
    if (!(qi >= 0.0)) {
      std::ostringstream msg;
      msg << "eigensolve: potential q(x) must be >= 0, got " << qi
          << " at x = " << eig.x[i];
      throw std::invalid_argument(msg.str());
    }
    eig.diag[i] = (ahalf[i] + ahalf[i + 1]) * ih2 + qi;
    if (i < M - 1) eig.sub[i] = -ahalf[i + 1] * ih2;
  }

  // all eigenvalues from the tridiagonal (cheap), then the requested
  // eigenvectors by shifted inverse iteration
  Eigen::Map<const Eigen::VectorXd> dmap(eig.diag.data(), M);
  Eigen::Map<const Eigen::VectorXd> smap(eig.sub.data(), M - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(dmap, smap, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigensolve: tridiagonal eigenvalue solve failed");
  }
  eig.lambda.assign(es.eigenvalues().data(), es.eigenvalues().data() + n_modes);

  eig.phi.assign(n_modes, std::vector<double>(M));
  for (int n = 1; n <= n_modes; ++n) {
    std::vector<double>& v = eig.phi[n - 1];
    // the Laplacian mode is an excellent starting guess for smooth a, q
    for (int i = 0; i < M; ++i) v[i] = std::sin(n * kPi * eig.x[i] / op.L);
    const double shift = eig.lambda[n - 1] * (1.0 + 1e-11) + 1e-300;
    for (int it = 0; it < 3; ++it) {
      shifted_thomas(eig.diag, eig.sub, shift, &v);
      const double nv = norm_h(v, h);
      for (double& vi : v) vi /= nv;
    }
    if (v[0] < 0.0) {
      for (double& vi : v) vi = -vi;  // positive just inside x = 0
    }
  }
  return eig;
}

Projection project(const EigenSystem& eig, const std::vector<double>& f) {
  if (f.size() != eig.x.size()) {
    throw std::invalid_argument("project: grid size mismatch");
  }
  Projection pr;
  pr.coeffs.resize(eig.lambda.size());
  for (std::size_t n = 0; n < eig.lambda.size(); ++n) {
    NeumaierSum s;
    for (std::size_t i = 0; i < f.size(); ++i) s.add(f[i] * eig.phi[n][i]);
    pr.coeffs[n] = eig.h * s.total();
  }
  NeumaierSum f2;
  for (double fi : f) f2.add(fi * fi);
  const double energy = eig.h * f2.total();
  NeumaierSum a2;
  for (double an : pr.coeffs) a2.add(an * an);
  pr.parseval_defect = (energy > 0.0) ? (energy - a2.total()) / energy : 0.0;
  return pr;
}

std::vector<double> reconstruct(const EigenSystem& eig,
                                const std::vector<double>& coeffs) {
  if (coeffs.size() > eig.phi.size()) {
    throw std::invalid_argument("reconstruct: more coefficients than modes");
  }
  std::vector<double> u(eig.x.size(), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    NeumaierSum s;
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
      s.add(coeffs[n] * eig.phi[n][i]);
    }
    u[i] = s.total();
  }
  return u;
}

std::vector<double> boundary_slopes(const EigenSystem& eig) {
  std::vector<double> out(eig.lambda.size());
  if (eig.analytic) {
    const double norm = std::sqrt(2.0 / eig.L);
    for (std::size_t n = 0; n < out.size(); ++n) {
      out[n] = norm * (n + 1) * kPi / eig.L;
    }
    return out;
  }
  if (eig.x.size() < 4) throw std::invalid_argument("boundary_slopes: grid too small");
  for (std::size_t n = 0; n < out.size(); ++n) {
    const std::vector<double>& p = eig.phi[n];
    // 4th-order one-sided stencil through phi(0) = 0
    out[n] = (4.0 * p[0] - 3.0 * p[1] + (4.0 / 3.0) * p[2] - 0.25 * p[3]) / eig.h;
  }
  return out;
}

std::vector<double> boundary_flux(const EigenSystem& eig) {
  std::vector<double> out = boundary_slopes(eig);
  for (double& v : out) v *= -eig.a0;  // outward normal at x = 0 points in -x
  return out;
}

WeylFit weyl_check(const EigenSystem& eig) {
  const int N = static_cast<int>(eig.lambda.size());
  if (N < 20) {
    throw std::invalid_argument("weyl_check: need at least 20 eigenvalues");
  }
  // least squares on log lambda_n = log c + slope log n
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int n = 1; n <= N; ++n) {
    const double lx = std::log(static_cast<double>(n));
    const double ly = std::log(eig.lambda[n - 1]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  WeylFit fit;
  const double det = N * sxx - sx * sx;
  fit.slope = (N * sxy - sx * sy) / det;
  fit.c_lambda = std::exp((sy * sxx - sx * sxy) / det);
  fit.max_rel_residual = 0.0;
  for (int n = N / 2; n <= N; ++n) {
    const double pred = fit.c_lambda * std::pow(static_cast<double>(n), fit.slope);
    fit.max_rel_residual = std::max(
        fit.max_rel_residual,
        std::fabs(eig.lambda[n - 1] - pred) / eig.lambda[n - 1]);
  }
  return fit;
}

BlindSpots blind_spots(const std::vector<double>& coeffs, double rel_tol) {
  if (!(rel_tol > 0.0) || !(rel_tol < 1.0)) {
    throw std::invalid_argument("blind_spots: rel_tol must be in (0, 1)");
  }
  double amax = 0.0;
  for (double c : coeffs) amax = std::max(amax, std::fabs(c));
  BlindSpots bs;
  bs.subinterval_warning = false;
  if (amax == 0.0) {
    // everything is blind; report the first mode and warn
    bs.modes.push_back(0);
    bs.subinterval_warning = true;
    return bs;
  }
  int run_start = -1;
  int run_len = 0;
  for (int i = 0; i <= static_cast<int>(coeffs.size()); ++i) {
    const bool quiet = i < static_cast<int>(coeffs.size()) &&
                       std::fabs(coeffs[i]) <= rel_tol * amax;
    if (quiet) {
      if (run_len == 0) run_start = i;
      ++run_len;
    } else if (run_len > 0) {
      bs.modes.push_back(run_start);  // one representative per run
      if (run_len >= 3) bs.subinterval_warning = true;
      run_len = 0;
    }
  }
  return bs;
}

std::vector<double> elliptic_solve(const EigenSystem& eig,
                                   const std::vector<double>& rhs) {
  if (eig.diag.empty()) {
    throw std::invalid_argument(
        "elliptic_solve: no assembled matrix (analytic system)");
  }
  if (rhs.size() != eig.diag.size()) {
    throw std::invalid_argument("elliptic_solve: grid size mismatch");
  }
  std::vector<double> u = rhs;
  shifted_thomas(eig.diag, eig.sub, 0.0, &u);
  return u;
}

std::vector<double> sample_on_grid(const EigenSystem& eig,
                                   const std::function<double(double)>& f) {
  std::vector<double> v(eig.x.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(eig.x[i]);
  return v;
}

}  // namespace fracsource
