#pragma once
// Dense least squares in double-double precision for the deliberately
// ill-conditioned fits this toolkit runs: inverse-power tail bases on finite
// log windows and generalized Vandermonde moment systems. Columns are scaled
// to unit norm first; the conditioning estimate is the max/min ratio of the
// diagonal of R from modified Gram-Schmidt (with one reorthogonalization
// pass) on the scaled matrix, i.e. how much of each column survives
// projection onto the earlier ones.

#include <vector>

#include "fracsource/ddouble.hpp"

namespace fracsource {

struct LsSolution {
  std::vector<double> x;       // minimizer, rounded to double at the end
  double conditioning = 0.0;   // >= 1; large means near-collinear columns
  double residual_norm = 0.0;  // ||b - M x||_2 over the weighted rows
};

// Minimize || diag(w) (M x - b) ||_2 where M is given by columns.
// row_weights may be empty (all ones). rows >= cols and cols >= 1 required.
// A column annihilated by the earlier ones (R_jj ~ 0) gets x_j = 0 and
// conditioning = +inf rather than an exception: callers surface the flag.
LsSolution solve_ls_dd(const std::vector<std::vector<dd>>& cols,
                       const std::vector<dd>& b,
                       const std::vector<double>& row_weights = {});

}  // namespace fracsource
