#include "fracsource/linalg_dd.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fracsource {

namespace {

dd dot(const std::vector<dd>& a, const std::vector<dd>& b) {
  dd s(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

LsSolution solve_ls_dd(const std::vector<std::vector<dd>>& cols,
                       const std::vector<dd>& b,
                       const std::vector<double>& row_weights) {
  const std::size_t m = cols.size();
  const std::size_t n = b.size();
  if (m == 0 || n < m) {
    throw std::invalid_argument("solve_ls_dd: need 1 <= cols <= rows");
  }
  for (const auto& c : cols) {
    if (c.size() != n) throw std::invalid_argument("solve_ls_dd: ragged matrix");
  }
  if (!row_weights.empty() && row_weights.size() != n) {
    throw std::invalid_argument("solve_ls_dd: weight length mismatch");
  }

  std::vector<std::vector<dd>> a(cols);
  std::vector<dd> rhs(b);
  if (!row_weights.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) a[j][i] *= row_weights[i];
      rhs[i] *= row_weights[i];
    }
  }

  // unit-scale the columns so the R diagonal reads as a collinearity measure
  std::vector<dd> scale(m);
  for (std::size_t j = 0; j < m; ++j) {
    scale[j] = sqrt_dd(dot(a[j], a[j]));
    if (scale[j].hi <= 0.0) {
      scale[j] = dd(1.0);  // all-zero column, handled via R_jj below
    } else {
      for (dd& v : a[j]) v /= scale[j];
    }
  }

  // modified Gram-Schmidt with one reorthogonalization pass
  std::vector<std::vector<dd>> q = a;
  std::vector<std::vector<dd>> R(m, std::vector<dd>(m, dd(0.0)));
  std::vector<bool> dead(m, false);
  double rmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        if (dead[i]) continue;
        const dd d = dot(q[i], q[j]);
        R[i][j] += d;
        for (std::size_t s = 0; s < n; ++s) q[j][s] -= d * q[i][s];
      }
    }
    const dd nrm = sqrt_dd(dot(q[j], q[j]));
    R[j][j] = nrm;
    if (nrm.hi < 1e-30) {
      dead[j] = true;
      rmin = 0.0;
      continue;
    }
    rmin = std::min(rmin, nrm.hi);
    rmax = std::max(rmax, nrm.hi);
    for (dd& v : q[j]) v /= nrm;
  }

  // back substitution on R x = Q^T rhs
  std::vector<dd> qtb(m, dd(0.0)), x(m, dd(0.0));
  for (std::size_t j = 0; j < m; ++j) {
    if (!dead[j]) qtb[j] = dot(q[j], rhs);
  }
  for (std::size_t jj = m; jj-- > 0;) {
    if (dead[jj]) continue;
    dd v = qtb[jj];
    for (std::size_t i = jj + 1; i < m; ++i) {
      if (!dead[i]) v -= R[jj][i] * x[i];
    }
    x[jj] = v / R[jj][jj];
  }

  LsSolution out;
  out.x.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    out.x[j] = dead[j] ? 0.0 : to_double(x[j] / scale[j]);
  }
  out.conditioning = (rmin > 0.0 && rmax > 0.0)
                         ? rmax / rmin
                         : std::numeric_limits<double>::infinity();

  // residual over the weighted system, using the undead solution
  dd rss(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    dd r = rhs[i];
    for (std::size_t j = 0; j < m; ++j) {
      if (!dead[j]) r -= a[j][i] * x[j];
    }
    rss += r * r;
  }
  out.residual_norm = to_double(sqrt_dd(rss));
  return out;
}

}  // namespace fracsource
