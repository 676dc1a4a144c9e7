#pragma once

#include <cmath>

namespace hjym::detail {

// Neumaier compensated accumulator; summation order is fixed by the caller,
// which keeps every reduction in the library bit-reproducible.
struct KSum {
  double s = 0.0, c = 0.0;

  void add(double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

}  // namespace hjym::detail
