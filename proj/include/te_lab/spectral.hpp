// Trigonometric interpolation and spectral differentiation on the circle.
#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace te {

// Interpolant of real samples f(2 pi k / N), k = 0..N-1, N a power of two.
//
// Anti-periodic data (f(phi + 2 pi) = -f(phi), which is what a coupling
// function looks like when its eigenvector comes back flipped after a full
// turn) is expanded in half-integer wavenumbers instead.
//
// Coefficients below `noise_floor * max|c|`, or below ten times the
// round-off level seen in the top wavenumbers, are dropped. This keeps high
// derivatives from amplifying noise in the samples.
class PeriodicSeries {
 public:
  explicit PeriodicSeries(std::span<const double> samples, bool antiperiodic = false,
                          double noise_floor = 1e-15);

  int size() const { return static_cast<int>(coeffs_.size()); }
  bool antiperiodic() const { return antiperiodic_; }

  // d^order f / dphi^order at an arbitrary angle.
  double value(double phi, int order = 0) const;
  // The derivative sampled back on the original grid.
  std::vector<double> derivative_samples(int order) const;
  // max over the grid of |d^order f|.
  double max_abs_derivative(int order) const;
  // Largest retained |c_k| over the top quarter of wavenumbers, relative to
  // max |c_k|. Small for well-resolved smooth data.
  double tail_ratio() const;

 private:
  double wavenumber(int m) const;

  std::vector<std::complex<double>> coeffs_;
  bool antiperiodic_;
};

// Unscaled forward / 1/N-scaled inverse transforms along both axes of a
// square complex array (row-major ordering is not assumed).
void fft2(Eigen::MatrixXcd& a);
void ifft2(Eigen::MatrixXcd& a);

}  // namespace te
