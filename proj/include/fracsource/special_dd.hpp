// Elementary and Gamma-family functions in double-double precision.
// These back the series/asymptotic kernels where binary64 loses the result
// entirely (alternating sums, coefficient ratios across 30 orders of
// magnitude). Accuracy target ~1e-29 relative, verified against frozen
// high-precision reference values in the tests.
#pragma once

#include "fracsource/ddouble.hpp"

namespace fracsource {

inline const dd dd_pi(3.141592653589793116, 1.2246467991473531772e-16);
inline const dd dd_ln2(6.9314718055994530942e-01, 2.3190468138462995584e-17);

// e^x; underflows to 0 below ~-745, |x| must stay under ~709
dd exp_dd(dd x);

// natural log, x > 0
dd ln_dd(dd x);

// sin(pi*x) and cos(pi*x) with exact integer/half-integer behavior
dd sinpi_dd(dd x);
dd cospi_dd(dd x);

// log Gamma(x), x > 0 (Spouge expansion, a = 41)
dd lngamma_dd(dd x);

// 1/Gamma(x) for any real x; exactly 0 at nonpositive integers.
// Arguments are limited to x > -170 or so before Gamma(1-x) overflows;
// callers needing smaller x work in log space with lngamma instead.
dd rgamma_dd(dd x);

inline double rgamma(double x) { return to_double(rgamma_dd(dd(x))); }

}  // namespace fracsource
