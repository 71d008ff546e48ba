// Least-squares power-law fits.
#pragma once

#include <span>

namespace te {

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  int points = 0;
};

// Fits log y = intercept + slope * log x. Points with y <= 0 are skipped.
PowerLawFit fit_loglog(std::span<const double> x, std::span<const double> y);

// Plain linear fit y = intercept + slope * x.
PowerLawFit fit_linear(std::span<const double> x, std::span<const double> y);

}  // namespace te
