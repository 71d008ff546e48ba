// Derivatives of omega_j on the circle, the curvature factor omega + omega''
// of the Fresnel sheets and their contact orders.
#pragma once

#include <span>
#include <vector>

#include "te_lab/fit.hpp"
#include "te_lab/media.hpp"
#include "te_lab/spectral.hpp"

namespace te {

class FresnelProfile {
 public:
  FresnelProfile(const Medium& m, int j, int n = 2048);

  int sheet() const { return j_; }
  int size() const { return static_cast<int>(samples_.size()); }
  const std::vector<double>& samples() const { return samples_; }

  double omega(double phi, int order = 0) const { return series_.value(phi, order); }
  // d^k/dphi^k (omega + omega'').
  double factor_derivative(double phi, int k = 0) const;
  double curvature_factor(double phi) const { return factor_derivative(phi, 0); }
  // max over the grid of |d^k (omega + omega'')|.
  double max_abs_factor_derivative(int k) const;
  std::vector<double> factor_samples() const;

  // True if the sheet touches the other one within `window` of phi.
  bool crossing_near(double phi, double window = 0.05) const;

 private:
  int j_;
  std::vector<double> samples_;
  std::vector<double> gap_;  // kappa_j - kappa_other on the grid
  PeriodicSeries series_;
  mutable std::vector<double> max_cache_;
};

// Rejects directions with a branch crossing nearby.
double curvature_factor(const Medium& m, int j, const Vector2d& eta);

struct ContactOrder {
  int gamma_bar = 0;
  bool exceeds_cap = false;  // order > 8
};
ContactOrder contact_order(const FresnelProfile& p, double phi_bar);
ContactOrder contact_order(const Medium& m, int j, const Vector2d& eta_bar);

// Angles where the curvature factor of the sheet vanishes.
std::vector<double> flat_points(const FresnelProfile& p);

struct Prop33Row {
  double rho = 0.0;
  int k = 0;
  double max_ratio_re = 0.0, max_ratio_im = 0.0;
};
struct Prop33Report {
  int ell = 0;
  std::vector<Prop33Row> rows;
  // c(|xi|) = max over k of the ratios; log-log fits in |xi|.
  PowerLawFit c_re_small, c_im_small, c_re_large, c_im_large;
  bool continuation_ok = true;
};
Prop33Report verify_prop33(const Medium& m, const Vector2d& eta_bar, int j0, int k_max,
                           std::span<const double> small_radii, std::span<const double> large_radii);

}  // namespace te
