// Smooth switches from 0 to 1 used by the micro-local filters.
#pragma once

#include <cmath>

namespace te {

enum class CutoffKind { smoothstep, bump };

// chi(s) = 0 for s <= a, 1 for s >= b.
inline double cutoff(double s, double a, double b, CutoffKind kind = CutoffKind::smoothstep) {
  if (s <= a) return 0.0;
  if (s >= b) return 1.0;
  const double x = (s - a) / (b - a);
  if (kind == CutoffKind::smoothstep) return x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
  // C-infinity: e^{-1/x} / (e^{-1/x} + e^{-1/(1-x)})
  const double f = std::exp(-1.0 / x), g = std::exp(-1.0 / (1.0 - x));
  return f / (f + g);
}

}  // namespace te
