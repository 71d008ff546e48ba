// Dense types and small helpers shared across the library.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace te {

template <typename Scalar>
using Complex = std::complex<Scalar>;

// The coupled symbol is hard-wired 5x5: (+w1, +w2, -w1, -w2, theta).
template <typename Scalar>
using Matrix5 = Eigen::Matrix<std::complex<Scalar>, 5, 5>;
template <typename Scalar>
using Vector5 = Eigen::Matrix<std::complex<Scalar>, 5, 1>;
template <typename Scalar>
using Vector6 = Eigen::Matrix<std::complex<Scalar>, 6, 1>;

using cd = std::complex<double>;
using Matrix5cd = Matrix5<double>;
using Vector5cd = Vector5<double>;
using Vector6cd = Vector6<double>;
using Vector5d = Eigen::Matrix<double, 5, 1>;
using Eigen::Matrix2cd;
using Eigen::Matrix2d;
using Eigen::Vector2d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Rejected input: parameter ranges, malformed configs, preconditions.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iteration caps, singular transforms, lost spectral gaps.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Vector2d direction(double phi) { return {std::cos(phi), std::sin(phi)}; }

// Angle in [0, 2pi).
inline double wrap_angle(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

inline double angle_of(const Vector2d& v) { return wrap_angle(std::atan2(v.y(), v.x())); }

// Signed angular difference a - b folded into (-pi, pi].
inline double angle_diff(double a, double b) {
  double d = std::remainder(a - b, kTwoPi);
  return d <= -kPi ? d + kTwoPi : d;
}

inline void require_unit(const Vector2d& eta) {
  if (std::abs(eta.norm() - 1.0) > 1e-12)
    throw ValidationError("direction must be a unit vector (|eta| = " + std::to_string(eta.norm()) + ")");
}

inline bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace te
