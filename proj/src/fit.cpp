#include "te_lab/fit.hpp"

#include <cmath>
#include <vector>

#include "te_lab/types.hpp"

namespace te {

PowerLawFit fit_linear(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("fit: x and y differ in length");
  const int n = static_cast<int>(x.size());
  if (n < 2) throw NumericalError("fit: need at least two points");
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) throw NumericalError("fit: degenerate abscissae");
  PowerLawFit f;
  f.points = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (n > 2) {
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      ss += r * r;
    }
    f.stderr_slope = std::sqrt(ss / (n - 2) / sxx);
  }
  return f;
}

PowerLawFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("fit: x and y differ in length");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0) || !(x[i] > 0.0)) continue;
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_linear(lx, ly);
}

}  // namespace te
