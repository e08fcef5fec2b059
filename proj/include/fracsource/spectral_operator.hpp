// Sturm-Liouville operator A u = -(a(x) u')' + q(x) u on (0, L) with
// Dirichlet ends: discretization, eigenpairs, projections, and the two
// spectral diagnostics the recovery pipeline leans on (Weyl growth of the
// eigenvalues, blind spots of a spatial source).
#pragma once

#include <functional>
#include <vector>

namespace fracsource {

struct SpectralOperator {
  double L = 1.0;
  std::function<double(double)> a;  // diffusivity, must stay > 0
  std::function<double(double)> q;  // potential, must stay >= 0
  bool analytic = false;            // pure Laplacian: closed-form eigenpairs

  // -u'' on (0, L): lambda_n = (n pi / L)^2, phi_n = sqrt(2/L) sin(n pi x/L)
  static SpectralOperator laplacian(double L);
  static SpectralOperator variable(double L, std::function<double(double)> a,
                                   std::function<double(double)> q);
};

struct EigenSystem {
  double L = 0.0;
  double h = 0.0;                        // interior spacing, h = L/(M+1)
  std::vector<double> x;                 // interior nodes x_i = (i+1) h
  std::vector<double> lambda;            // ascending, n_modes of them
  std::vector<std::vector<double>> phi;  // phi[n][i], L2(h)-normalized
  bool analytic = false;
  double a0 = 1.0;                       // a(0), for the flux helper
  // assembled FD tridiagonal (kept so linear solves use the same matrix
  // as the eigenpairs; empty for analytic systems)
  std::vector<double> diag;
  std::vector<double> sub;
};

// Discretize (for analytic operators: sample) and extract the lowest
// n_modes eigenpairs. grid_size is the interior node count M; eigenvalues
// come from the full symmetric tridiagonal spectrum, eigenvectors from
// shifted inverse iteration. Throws std::invalid_argument when a <= 0 or
// q < 0 anywhere, naming the offending location.
EigenSystem eigensolve(const SpectralOperator& op, int n_modes, int grid_size);

struct Projection {
  std::vector<double> coeffs;  // a_n = h sum_i f_i phi_n_i
  double parseval_defect;      // (|f|^2 - sum a_n^2) / |f|^2, energy missed
};

Projection project(const EigenSystem& eig, const std::vector<double>& f);

// sum_n coeffs[n] phi_n on the grid.
std::vector<double> reconstruct(const EigenSystem& eig,
                                const std::vector<double>& coeffs);

// phi_n'(0) by the 4th-order one-sided stencil through phi(0) = 0 (exact
// derivative for analytic systems). Sign convention: phi_n > 0 just inside
// x = 0, so these are positive.
std::vector<double> boundary_slopes(const EigenSystem& eig);

// Outward-normal diffusive flux factor at x = 0: -a(0) phi_n'(0).
std::vector<double> boundary_flux(const EigenSystem& eig);

struct WeylFit {
  double slope;             // d log lambda / d log n, expect ~2
  double c_lambda;          // prefactor of lambda_n ~ c n^slope
  double max_rel_residual;  // worst relative fit defect over the top half
};

// Least-squares fit of log lambda_n against log n. Requires >= 20 modes.
WeylFit weyl_check(const EigenSystem& eig);

struct BlindSpots {
  std::vector<int> modes;     // representative indices (0-based), |a_n| tiny
  bool subinterval_warning;   // a run of >= 3 consecutive modes qualifies
};

// Modes whose projection coefficient is below rel_tol * max |a_n|: these
// carry no observable signal and their sources are unrecoverable.
BlindSpots blind_spots(const std::vector<double>& coeffs, double rel_tol);

// Solve A u = rhs with the assembled tridiagonal (Thomas). FD systems only;
// using the identical matrix lets discretization error cancel against the
// eigenpair route when the two are compared.
std::vector<double> elliptic_solve(const EigenSystem& eig,
                                   const std::vector<double>& rhs);

// Convenience: sample a scalar function on the system's interior grid.
std::vector<double> sample_on_grid(const EigenSystem& eig,
                                   const std::function<double(double)>& f);

}  // namespace fracsource
