#include "te_lab/fresnel.hpp"

#include <algorithm>
#include <cmath>

#include "te_lab/classify.hpp"
#include "te_lab/symbol.hpp"

namespace te {

namespace {

std::vector<double> omega_samples(const CircleSamples& s, int j) {
  return s.values([j](const ElasticEigenFrame& f) { return f.omega(j); });
}

// Max of |x| over a vector.
double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

FresnelProfile::FresnelProfile(const Medium& m, int j, int n)
    : j_(j), series_(std::vector<double>(4, 1.0)) {
  if (j != 1 && j != 2) throw ValidationError("sheet index must be 1 or 2");
  if (n < 64 || !is_power_of_two(n)) throw ValidationError("profile size must be a power of two >= 64");
  const CircleSamples s = sample_circle(m, n);
  samples_ = omega_samples(s, j);
  gap_ = s.values([j](const ElasticEigenFrame& f) { return f.kappa(j) - f.kappa(3 - j); });
  series_ = PeriodicSeries(samples_);
}

double FresnelProfile::factor_derivative(double phi, int k) const {
  return series_.value(phi, k) + series_.value(phi, k + 2);
}

double FresnelProfile::max_abs_factor_derivative(int k) const {
  if (static_cast<int>(max_cache_.size()) <= k) {
    for (int q = static_cast<int>(max_cache_.size()); q <= k; ++q) {
      auto d = series_.derivative_samples(q);
      const auto d2 = series_.derivative_samples(q + 2);
      for (size_t i = 0; i < d.size(); ++i) d[i] += d2[i];
      max_cache_.push_back(max_abs(d));
    }
  }
  return max_cache_[k];
}

std::vector<double> FresnelProfile::factor_samples() const {
  auto f = samples_;
  const auto d2 = series_.derivative_samples(2);
  for (size_t i = 0; i < f.size(); ++i) f[i] += d2[i];
  return f;
}

bool FresnelProfile::crossing_near(double phi, double window) const {
  const int n = size();
  const double h = kTwoPi / n;
  double scale = 0.0;
  for (double w : samples_) scale = std::max(scale, w * w);
  const int span = static_cast<int>(std::ceil(window / h)) + 1;
  const int c = static_cast<int>(std::lround(wrap_angle(phi) / h));
  for (int d = -span; d <= span; ++d) {
    const double g = gap_[((c + d) % n + n) % n];
    const double gn = gap_[((c + d + 1) % n + n) % n];
    if (std::abs(g) <= 1e-9 * scale || g * gn < 0.0) return true;
  }
  return false;
}

double curvature_factor(const Medium& m, int j, const Vector2d& eta) {
  require_unit(eta);
  const FresnelProfile p(m, j);
  const double phi = angle_of(eta);
  if (p.crossing_near(phi))
    throw ValidationError("branch crossing within 0.05 rad of phi = " + std::to_string(phi) +
                          "; derivatives of omega_" + std::to_string(j) + " are unreliable there");
  return p.curvature_factor(phi);
}

ContactOrder contact_order(const FresnelProfile& p, double phi_bar) {
  ContactOrder out;
  for (int k = 0; k + 2 <= kMaxDerivativeOrder; ++k) {
    const double d = p.factor_derivative(phi_bar, k);
    if (std::abs(d) > 1e-6 * p.max_abs_factor_derivative(k)) {
      out.gamma_bar = k + 2;
      return out;
    }
  }
  out.gamma_bar = kMaxDerivativeOrder + 1;
  out.exceeds_cap = true;
  return out;
}

ContactOrder contact_order(const Medium& m, int j, const Vector2d& eta_bar) {
  require_unit(eta_bar);
  const FresnelProfile p(m, j);
  const double phi = angle_of(eta_bar);
  if (p.crossing_near(phi))
    throw ValidationError("branch crossing near phi = " + std::to_string(phi) + "; contact order undefined");
  return contact_order(p, phi);
}

std::vector<double> flat_points(const FresnelProfile& p) {
  const auto f = p.factor_samples();
  const int n = static_cast<int>(f.size());
  const double h = kTwoPi / n;
  const double tol = 1e-6 * max_abs(f);
  auto F = [&p](double x) { return p.curvature_factor(x); };
  std::vector<double> out;
  for (int k = 0; k < n; ++k) {
    const double a = f[k], b = f[(k + 1) % n], prev = f[(k + n - 1) % n];
    if (a * b < 0.0) {
      double lo = k * h, hi = (k + 1) * h, flo = a;
      while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        const double fm = F(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.push_back(wrap_angle(0.5 * (lo + hi)));
    } else if (std::abs(a) <= tol && std::abs(a) <= std::abs(prev) && std::abs(a) < std::abs(b)) {
      out.push_back(k * h);  // touching zero on the grid
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// nu_{j0}+ at phi_bar + 2 pi k / n along the full circle, continued from the
// real root rho omega_{j0}(phi_bar).
bool continue_branch(const Medium& m, double phi_bar, int j0, double rho, int n, std::vector<cd>& nu,
                     std::vector<double>& omega) {
  nu.assign(n, cd{});
  omega.assign(n, 0.0);
  auto roots_at = [&](int k, std::array<cd, 5>& r) {
    const ElasticEigenFrame f = m.frame(phi_bar + kTwoPi * k / n);
    omega[k % n] = f.omega(j0);
    r = quintic_roots(assemble_B(m, rho, f));
  };
  auto nearest = [](const std::array<cd, 5>& r, cd target) {
    int best = 0;
    for (int i = 1; i < 5; ++i)
      if (std::abs(r[i] - target) < std::abs(r[best] - target)) best = i;
    return best;
  };
  std::array<cd, 5> r;
  roots_at(0, r);
  nu[0] = r[nearest(r, rho * omega[0])];
  for (int k = 1; k < n; ++k) {
    roots_at(k, r);
    const cd pred = k >= 2 ? 2.0 * nu[k - 1] - nu[k - 2] : nu[k - 1];
    nu[k] = r[nearest(r, pred)];
  }
  // Closing the loop must land on the starting root.
  roots_at(0, r);
  const cd pred = 2.0 * nu[n - 1] - nu[n - 2];
  return std::abs(r[nearest(r, pred)] - nu[0]) <= 1e-9 * (1.0 + std::abs(nu[0]));
}

}  // namespace

Prop33Report verify_prop33(const Medium& m, const Vector2d& eta_bar, int j0, int k_max,
                           std::span<const double> small_radii, std::span<const double> large_radii) {
  const DirectionClass cls = classify_direction(m, eta_bar);
  if (cls.tag != DirectionTag::hyperbolic || cls.j0 != j0)
    throw ValidationError("eta_bar is not hyperbolic with respect to branch " + std::to_string(j0));
  if (!cls.vanishing_order || cls.vanishing_order->ell == 0)
    throw ValidationError("vanishing order at eta_bar not determined");
  Prop33Report rep;
  rep.ell = cls.vanishing_order->ell;
  if (k_max < 0 || k_max > 2 * rep.ell - 1)
    throw ValidationError("k_max must lie in [0, 2 ell - 1] = [0, " + std::to_string(2 * rep.ell - 1) + "]");

  constexpr int kSamples = 1024;
  const double phi_bar = cls.phi;
  std::vector<double> deltas;
  for (int i = 0; i <= 40; ++i) deltas.push_back(std::pow(10.0, -3.0 + 2.0 * i / 40.0));

  auto run = [&](std::span<const double> radii, std::vector<double>& c_re, std::vector<double>& c_im) {
    for (double rho : radii) {
      std::vector<cd> nu;
      std::vector<double> omega;
      if (!continue_branch(m, phi_bar, j0, rho, kSamples, nu, omega)) rep.continuation_ok = false;
      std::vector<double> g_re(kSamples), g_im(kSamples);
      for (int k = 0; k < kSamples; ++k) {
        g_re[k] = (nu[k].real() - rho * omega[k]) / rho;
        g_im[k] = nu[k].imag();
      }
      const PeriodicSeries s_re(g_re), s_im(g_im);
      if (s_re.tail_ratio() > 1e-8 || s_im.tail_ratio() > 1e-8) rep.continuation_ok = false;
      double cre = 0.0, cim = 0.0;
      for (int k = 0; k <= k_max; ++k) {
        Prop33Row row;
        row.rho = rho;
        row.k = k;
        // Values below the interpolation noise carry no information.
        const double floor_re = 1e-11 * s_re.max_abs_derivative(k);
        const double floor_im = 1e-11 * s_im.max_abs_derivative(k);
        for (double d : deltas) {
          for (double sgn : {-1.0, 1.0}) {
            const double dist = 2.0 * std::sin(0.5 * d);
            const double w = std::pow(dist, 2 * rep.ell - k);
            const double vr = std::abs(s_re.value(sgn * d, k));
            const double vi = std::abs(s_im.value(sgn * d, k));
            if (vr > floor_re) row.max_ratio_re = std::max(row.max_ratio_re, vr / w);
            if (vi > floor_im) row.max_ratio_im = std::max(row.max_ratio_im, vi / w);
          }
        }
        cre = std::max(cre, row.max_ratio_re);
        cim = std::max(cim, row.max_ratio_im);
        rep.rows.push_back(row);
      }
      c_re.push_back(cre);
      c_im.push_back(cim);
    }
  };
  std::vector<double> cre_s, cim_s, cre_l, cim_l;
  run(small_radii, cre_s, cim_s);
  run(large_radii, cre_l, cim_l);
  rep.c_re_small = fit_loglog(small_radii, cre_s);
  rep.c_im_small = fit_loglog(small_radii, cim_s);
  rep.c_re_large = fit_loglog(large_radii, cre_l);
  rep.c_im_large = fit_loglog(large_radii, cim_l);
  return rep;
}

}  // namespace te
