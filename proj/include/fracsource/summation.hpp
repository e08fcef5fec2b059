// Neumaier compensated summation: one running compensation term catches both
// the usual Kahan case and the case where the incoming term dwarfs the sum.
// Used everywhere a spectral or asymptotic series is accumulated in binary64.
#pragma once

#include <cmath>

namespace fracsource {

struct NeumaierSum {
  double s = 0.0;
  double c = 0.0;

  void add(double x) {
    double t = s + x;
    if (std::fabs(s) >= std::fabs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }

  double total() const { return s + c; }
};

}  // namespace fracsource
