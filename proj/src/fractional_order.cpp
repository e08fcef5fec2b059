#include "fracsource/fractional_order.hpp"

#include <cmath>
#include <stdexcept>

namespace fracsource {

FractionalOrder make_fractional_order(double alpha) {
  if (!std::isfinite(alpha) || !(alpha > 0.0) || !(alpha < 2.0) || alpha == 1.0) {
    throw std::invalid_argument(
        "fractional order must lie in (0,1) or (1,2)");
  }
  FractionalOrder ord;
  ord.alpha = alpha;

  // continued-fraction convergents h_i / k_i of alpha; the first one within
  // detection_bound with denominator <= 10^6 wins (convergents are the best
  // rational approximations, so nothing is missed)
  const std::int64_t qmax = 1000000;
  double x = alpha;
  std::int64_t h0 = 1, h1 = static_cast<std::int64_t>(std::floor(x));
  std::int64_t k0 = 0, k1 = 1;
  x -= std::floor(x);
  for (int it = 0; it < 64; ++it) {
    if (std::fabs(alpha - static_cast<double>(h1) / static_cast<double>(k1)) <
        ord.detection_bound) {
      ord.rational = true;
      ord.p = h1;
      ord.q = k1;
      break;
    }
    if (x == 0.0) break;
    x = 1.0 / x;
    const std::int64_t ai = static_cast<std::int64_t>(std::floor(x));
    x -= std::floor(x);
    const std::int64_t h2 = ai * h1 + h0;
    const std::int64_t k2 = ai * k1 + k0;
    if (k2 > qmax) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
  }
  return ord;
}

std::vector<int> lk_sequence(const FractionalOrder& order, int count) {
  if (count < 1 || count > 4096) {
    throw std::invalid_argument("lk_sequence: count out of range");
  }
  std::vector<int> lk;
  lk.reserve(count);
  for (int k = 1; static_cast<int>(lk.size()) < count; ++k) {
    if (order.rational && (k % order.q == 0)) continue;  // k alpha integral
    lk.push_back(k);
  }
  return lk;
}

}  // namespace fracsource
