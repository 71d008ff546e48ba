#include "te_lab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "te_lab/types.hpp"

namespace te {

PeriodicSeries::PeriodicSeries(std::span<const double> samples, bool antiperiodic, double noise_floor)
    : antiperiodic_(antiperiodic) {
  const long n = static_cast<long>(samples.size());
  if (!is_power_of_two(n) || n < 4) throw ValidationError("periodic series needs a power-of-two sample count >= 4");

  std::vector<std::complex<double>> in(n);
  for (long k = 0; k < n; ++k) {
    const double phi = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
    in[k] = antiperiodic ? samples[k] * std::polar(1.0, -0.5 * phi) : std::complex<double>(samples[k], 0.0);
  }
  Eigen::FFT<double> fft;
  fft.fwd(coeffs_, in);
  double cmax = 0.0;
  for (auto& c : coeffs_) {
    c /= static_cast<double>(n);
    cmax = std::max(cmax, std::abs(c));
  }
  // Round-off level: median magnitude over the top quarter of wavenumbers,
  // trusted only when it already looks like round-off.
  std::vector<double> top;
  for (long m = 3 * n / 8; m < 5 * n / 8; ++m) top.push_back(std::abs(coeffs_[m]));
  std::nth_element(top.begin(), top.begin() + top.size() / 2, top.end());
  const double noise = top.empty() ? 0.0 : top[top.size() / 2];
  double floor = noise_floor * cmax;
  if (noise < 1e-12 * cmax) floor = std::max(floor, 10.0 * noise);
  for (auto& c : coeffs_)
    if (std::abs(c) <= floor) c = 0.0;
}

double PeriodicSeries::wavenumber(int m) const {
  const int n = size();
  double w = m < n / 2 ? m : m - n;
  return antiperiodic_ ? w + 0.5 : w;
}

double PeriodicSeries::value(double phi, int order) const {
  const int n = size();
  std::complex<double> sum = 0.0;
  for (int m = 0; m < n; ++m) {
    if (coeffs_[m] == 0.0) continue;
    if (!antiperiodic_ && m == n / 2) {
      // Nyquist mode of real data: split symmetrically between +-n/2.
      const double w = 0.5 * n;
      const std::complex<double> d = std::pow(std::complex<double>(0.0, w), order);
      sum += 0.5 * coeffs_[m] * (d * std::polar(1.0, w * phi) + std::conj(d) * std::polar(1.0, -w * phi));
      continue;
    }
    const double w = wavenumber(m);
    sum += coeffs_[m] * std::pow(std::complex<double>(0.0, w), order) * std::polar(1.0, w * phi);
  }
  return sum.real();
}

std::vector<double> PeriodicSeries::derivative_samples(int order) const {
  const int n = size();
  std::vector<std::complex<double>> spec(n);
  for (int m = 0; m < n; ++m) {
    if (!antiperiodic_ && m == n / 2) {
      // Nyquist cosine: odd derivatives vanish on the grid.
      spec[m] = order % 2 ? 0.0 : coeffs_[m] * std::pow(-0.25 * n * n, order / 2);
      continue;
    }
    spec[m] = coeffs_[m] * std::pow(std::complex<double>(0.0, wavenumber(m)), order);
  }
  std::vector<std::complex<double>> out;
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  fft.inv(out, spec);
  std::vector<double> res(n);
  for (int k = 0; k < n; ++k) {
    std::complex<double> v = out[k];
    if (antiperiodic_) v *= std::polar(1.0, 0.5 * kTwoPi * k / n);
    res[k] = v.real();
  }
  return res;
}

double PeriodicSeries::max_abs_derivative(int order) const {
  double mx = 0.0;
  for (double v : derivative_samples(order)) mx = std::max(mx, std::abs(v));
  return mx;
}

double PeriodicSeries::tail_ratio() const {
  const int n = size();
  double cmax = 0.0, tail = 0.0;
  for (int m = 0; m < n; ++m) {
    const double a = std::abs(coeffs_[m]);
    cmax = std::max(cmax, a);
    if (std::abs(wavenumber(m)) >= 0.375 * n) tail = std::max(tail, a);
  }
  return cmax > 0.0 ? tail / cmax : 0.0;
}

namespace {

void transform_axes(Eigen::MatrixXcd& a, bool inverse) {
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  const Eigen::Index rows = a.rows(), cols = a.cols();
  std::vector<std::complex<double>> in, out;

  in.resize(rows);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) in[r] = a(r, c);
    inverse ? fft.inv(out, in) : fft.fwd(out, in);
    for (Eigen::Index r = 0; r < rows; ++r) a(r, c) = out[r];
  }
  in.resize(cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) in[c] = a(r, c);
    inverse ? fft.inv(out, in) : fft.fwd(out, in);
    for (Eigen::Index c = 0; c < cols; ++c) a(r, c) = out[c];
  }
  if (inverse) a /= static_cast<double>(rows * cols);
}

}  // namespace

void fft2(Eigen::MatrixXcd& a) { transform_axes(a, false); }
void ifft2(Eigen::MatrixXcd& a) { transform_axes(a, true); }

}  // namespace te
