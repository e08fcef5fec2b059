// Forward solver for d_t^alpha u + A u = f(x) mu(t), u(0) = 0 (and u_t(0) = 0
// for alpha > 1), assembled mode by mode:
//   u(x, t) = sum_n a_n phi_n(x) psi_n(t),
//   psi_n(t) = int_0^t s^(alpha-1) E_{alpha,alpha}(-lambda_n s^alpha) mu(t-s) ds.
//
// psi_n comes in two independently-built accuracy grades:
//   * psi_n:          substitution w = (t-s)^alpha absorbs the kernel
//                     singularity exactly; geometric panels + Gauss-Kronrod,
//                     relative accuracy ~1e-8, fast (Chebyshev kernel).
//   * psi_n_highacc:  integration by parts through the bounded antiderivative
//                     G(s) = lambda^-1 (1 - E_{alpha,1}(-lambda s^alpha));
//                     the kernel factor is evaluated in double-double, giving
//                     ~1e-15 relative accuracy. Long-time tail fits need this
//                     grade: correlated 1e-8 quadrature error masquerades as
//                     tail structure and is worth ~1e4 times more damage than
//                     white noise of the same size.
#pragma once

#include <string>
#include <vector>

#include "fracsource/fractional_order.hpp"
#include "fracsource/mittag_leffler.hpp"
#include "fracsource/spectral_operator.hpp"
#include "fracsource/temporal_source.hpp"

namespace fracsource {

class PsiEngine {
 public:
  explicit PsiEngine(const FractionalOrder& order);

  double psi_n(double lambda, const TemporalSource& mu, double t,
               double rel_tol = 1e-10) const;
  double psi_n_highacc(double lambda, const TemporalSource& mu, double t) const;

  // G(s) above: the mode's step response to mu = 1 (exact closed form).
  double step_response(double lambda, double s) const;

  const FractionalOrder& order() const { return order_; }

 private:
  FractionalOrder order_;
  MLFastEvaluator fast_;        // E_{alpha,alpha} for the quadrature route
  std::vector<dd> lgam_e1_;     // lnGamma(alpha k + 1) cache for the dd route

  dd one_minus_e1_cached(double x) const;
};

// psi over a modes-by-times grid. Entries are independent, so the parallel
// fill is bitwise identical to the serial one.
struct PsiTable {
  std::vector<double> lambda;
  std::vector<double> times;
  std::vector<double> value;  // row-major: value[n * times.size() + j]
  double at(std::size_t n, std::size_t j) const {
    return value[n * times.size() + j];
  }
};

PsiTable build_psi_table(const PsiEngine& engine,
                         const std::vector<double>& lambdas,
                         const TemporalSource& mu,
                         const std::vector<double>& times, bool high_accuracy,
                         bool parallel, double rel_tol = 1e-10);

// Serial reference fill, kept as the comparison baseline for the parallel
// path (and for the benchmark tool).
PsiTable build_psi_table_serial(const PsiEngine& engine,
                                const std::vector<double>& lambdas,
                                const TemporalSource& mu,
                                const std::vector<double>& times,
                                bool high_accuracy, double rel_tol = 1e-10);

// Worker count used by the parallel table fill: FRACSOURCE_THREADS if set,
// otherwise the OpenMP default (1 in a serial build).
int resolve_thread_cap();

struct ObservationSpec {
  double x0 = 0.5;             // observation point in (0, L)
  std::vector<double> times;   // strictly increasing, > 0
};

struct ObservationTrace {
  double x0 = 0.0;
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> tail_bound;  // rigorous bound on the omitted-mode sum
  std::vector<std::string> warnings;
};

struct SolveOptions {
  bool high_accuracy = false;
  bool parallel = true;
  double quad_rel_tol = 1e-10;  // per-panel target of the standard grade
};

// Full pipeline: project f, synthesize the trace at x0, attach per-time
// truncation bounds (computed modes are summed exactly; the bound covers
// modes beyond the eigensystem via Weyl extrapolation).
ObservationTrace solve(const EigenSystem& eig, const std::vector<double>& f_grid,
                       const FractionalOrder& order, const TemporalSource& mu,
                       const ObservationSpec& obs,
                       const SolveOptions& opts = {});

// phi_n at an off-grid point (cubic interpolation through the nearest nodes,
// boundary zeros included; exact for analytic systems).
double eval_phi(const EigenSystem& eig, int n, double x0);

struct DecayProbe {
  double last_decade_slope = 0.0;  // d log|u| / d log t over [t_max/10, t_max]
  int sign_changes = 0;            // flips along the whole trace
  bool tail_single_signed = true;  // no flip in the last decade
};

// Requires >= 12 samples spanning >= 3 decades.
DecayProbe decay_probe(const ObservationTrace& trace);

std::vector<double> make_geometric_times(double t_min, double t_max,
                                         int per_decade);

}  // namespace fracsource
