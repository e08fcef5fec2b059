// The fractional time order alpha in (0,1) u (1,2), together with the
// number-theoretic facts the long-time expansion needs: whether alpha is
// (presumed) rational, and which inverse powers t^(-k alpha) survive (integer
// k alpha land on zeros of the reciprocal gamma factors and drop out).
#pragma once

#include <cstdint>
#include <vector>

namespace fracsource {

struct FractionalOrder {
  double alpha = 0.5;
  // true when a continued-fraction convergent p/q with q <= 10^6 lands
  // within detection_bound of alpha; such alpha are treated as exactly p/q
  bool rational = false;
  std::int64_t p = 0;
  std::int64_t q = 1;
  double detection_bound = 1e-13;
};

// Validates alpha in (0,1) u (1,2) and classifies it.
FractionalOrder make_fractional_order(double alpha);

// First `count` positive integers k with k * alpha not a positive integer,
// i.e. the exponent ladder t^(-l_k alpha) actually present in the long-time
// expansion. For rational alpha = p/q (reduced) these are exactly the k not
// divisible by q; a presumed-irrational alpha keeps every k.
std::vector<int> lk_sequence(const FractionalOrder& order, int count);

}  // namespace fracsource
