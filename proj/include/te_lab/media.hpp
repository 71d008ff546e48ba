// Elastic symbol families A(eta) on the unit circle and their eigen-frames.
#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "te_lab/types.hpp"

namespace te {

enum class MediumKind { isotropic, cubic, rhombic, custom_sampled };

std::string to_string(MediumKind kind);
MediumKind parse_medium_kind(const std::string& name);

using ParamMap = std::map<std::string, double>;

// Eigen-data of A(eta) on the continuous branches. Index j is 1-based to
// match the branch names kappa_1, kappa_2 used throughout.
struct ElasticEigenFrame {
  double phi = 0.0;
  Vector2d eta = Vector2d::UnitX();
  double kappa1 = 0.0, kappa2 = 0.0;
  double omega1 = 0.0, omega2 = 0.0;
  Vector2d r1 = Vector2d::UnitX(), r2 = Vector2d::UnitY();
  double a1 = 0.0, a2 = 0.0;

  double kappa(int j) const { return j == 1 ? kappa1 : kappa2; }
  double omega(int j) const { return j == 1 ? omega1 : omega2; }
  double a(int j) const { return j == 1 ? a1 : a2; }
  const Vector2d& r(int j) const { return j == 1 ? r1 : r2; }
  double trace() const { return kappa1 + kappa2; }
  // Columns are r1, r2; U0 = M^T U.
  Matrix2d diagonaliser() const {
    Matrix2d m;
    m.col(0) = r1;
    m.col(1) = r2;
    return m;
  }
};

// Immutable medium: kind, material constants, thermal constants gamma and
// kappa. Branch continuity is resolved against a precomputed sweep of frames
// seeded at phi = 0, so frame() is a pure function of the angle.
class Medium {
 public:
  MediumKind kind() const;
  const ParamMap& params() const;
  double gamma() const;
  double kappa() const;

  Matrix2d symbol(double phi) const;
  ElasticEigenFrame frame(double phi) const;
  // +1 when branch j closes after a full turn, -1 when its eigenvector
  // returns with flipped sign (possible for custom media only).
  int loop_sign(int j) const;

  struct Impl;

 private:
  explicit Medium(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;

  friend Medium make_medium(MediumKind, const ParamMap&, double, double);
  friend Medium make_custom_medium(const std::vector<Matrix2cd>&, double, double);
};

Medium make_medium(MediumKind kind, const ParamMap& params, double gamma, double kappa);
// Samples at N equispaced angles phi_k = 2 pi k / N, N a power of two.
Medium make_custom_medium(const std::vector<Matrix2cd>& samples, double gamma, double kappa);

// Shorthands for the built-in families.
Medium isotropic_medium(double lambda, double mu, double gamma = 1.0, double kappa = 1.0);
Medium cubic_medium(double tau, double mu, double lambda, double gamma = 1.0, double kappa = 1.0);
Medium rhombic_medium(double tau1, double tau2, double mu, double lambda, double gamma = 1.0,
                      double kappa = 1.0);

Matrix2d elastic_symbol(const Medium& m, const Vector2d& eta);
ElasticEigenFrame elastic_eigen(const Medium& m, const Vector2d& eta);
std::pair<double, double> coupling(const Medium& m, const Vector2d& eta);

// Branch functions sampled at n equispaced angles starting at phi = 0.
struct CircleSamples {
  std::vector<double> phi;
  std::vector<ElasticEigenFrame> frames;
  template <typename F>
  std::vector<double> values(F&& f) const {
    std::vector<double> out;
    out.reserve(frames.size());
    for (const auto& fr : frames) out.push_back(f(fr));
    return out;
  }
};
CircleSamples sample_circle(const Medium& m, int n);

}  // namespace te
