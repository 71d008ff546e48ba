#include "te_lab/classify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace te {

namespace {

using Scalar1D = std::function<double(double)>;

// Root of f in (lo, hi) given a sign change, to 1e-12 in angle.
double bisect(const Scalar1D& f, double lo, double hi, double flo) {
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Minimiser of |f| on [lo, hi] by golden section.
double golden_min(const Scalar1D& f, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = std::abs(f(x1)), f2 = std::abs(f(x2));
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = std::abs(f(x1));
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = std::abs(f(x2));
    }
  }
  return 0.5 * (lo + hi);
}

// Zeros of a sampled periodic-up-to-sign function; `tail_sign` relates the
// value at 2 pi to the value at 0. `accept_min` decides whether a refined
// local minimum of |f| counts as an even-order zero.
std::vector<double> scan_roots(const std::vector<double>& v, const Scalar1D& f, int tail_sign,
                               const std::function<bool(double)>& accept_min) {
  const int n = static_cast<int>(v.size());
  const double h = kTwoPi / n;
  std::vector<double> roots;
  for (int k = 0; k < n; ++k) {
    const double fk = v[k];
    const double fn = k + 1 < n ? v[k + 1] : tail_sign * v[0];
    if (fk == 0.0) {
      roots.push_back(k * h);
      continue;
    }
    if (fk * fn < 0.0) {
      roots.push_back(bisect(f, k * h, (k + 1) * h, fk));
      continue;
    }
    const double fp = k > 0 ? v[k - 1] : tail_sign * v[n - 1];
    if (std::abs(fk) <= std::abs(fp) && std::abs(fk) < std::abs(fn) && fk * fp > 0.0 && fk * fn > 0.0) {
      const double x = golden_min(f, (k - 1) * h, (k + 1) * h);
      if (accept_min(x)) roots.push_back(wrap_angle(x));
    }
  }
  return roots;
}

std::vector<double> merge_angles(std::vector<double> a) {
  for (auto& x : a) x = wrap_angle(x);
  std::sort(a.begin(), a.end());
  std::vector<double> out;
  for (double x : a)
    if (out.empty() || x - out.back() > 1e-10) out.push_back(x);
  if (out.size() > 1 && out.front() + kTwoPi - out.back() <= 1e-10) out.pop_back();
  return out;
}

bool is_degenerate(const ElasticEigenFrame& f) {
  return std::abs(f.kappa1 - f.kappa2) <= kDegenerateTol * std::max(f.kappa1, f.kappa2);
}

}  // namespace

std::string to_string(DirectionTag t) {
  switch (t) {
    case DirectionTag::parabolic: return "parabolic";
    case DirectionTag::hyperbolic: return "hyperbolic";
    case DirectionTag::degenerate: return "degenerate";
    case DirectionTag::gamma_degenerate: return "gamma_degenerate";
  }
  return "?";
}

int SpecialDirections::count(DirectionTag t) const {
  return static_cast<int>(std::count_if(directions.begin(), directions.end(),
                                        [t](const DirectionClass& d) { return d.tag == t; }));
}

CouplingProfiles coupling_profiles(const Medium& m, int n) {
  const CircleSamples s = sample_circle(m, n);
  CouplingProfiles p;
  for (int j = 1; j <= 2; ++j) {
    const auto v = s.values([j](const ElasticEigenFrame& f) { return f.a(j); });
    p.a.emplace_back(v, m.loop_sign(j) < 0);
  }
  return p;
}

bool check_A4(const Medium& m, const Vector2d& eta_bar, int j0) {
  const ElasticEigenFrame f = elastic_eigen(m, eta_bar);
  const double g2 = m.gamma() * m.gamma();
  const double rhs = 2.0 * f.kappa(j0) - f.trace();
  return std::abs(g2 - rhs) > 1e-9 * (g2 + f.trace());
}

VanishingOrder vanishing_order(const CouplingProfiles& p, double phi_bar, int j0) {
  const PeriodicSeries& a = p(j0);
  VanishingOrder out;
  if (a.max_abs_derivative(0) < 1e-12) {
    out.identically_vanishing = true;
    return out;
  }
  for (int n = 0; n <= kMaxDerivativeOrder; ++n) {
    const double scale = a.max_abs_derivative(n);
    const double d = a.value(phi_bar, n);
    if (std::abs(d) > 1e-6 * scale) {
      if (n == 0) return out;  // not a zero of a_j0
      out.ell = n;
      return out;
    }
  }
  out.identically_vanishing = true;
  return out;
}

VanishingOrder vanishing_order(const Medium& m, const Vector2d& eta_bar, int j0) {
  require_unit(eta_bar);
  return vanishing_order(coupling_profiles(m), angle_of(eta_bar), j0);
}

DirectionClass classify_direction(const Medium& m, const Vector2d& eta, const CouplingProfiles* profiles) {
  require_unit(eta);
  DirectionClass c;
  c.phi = angle_of(eta);
  c.eta = eta;
  const ElasticEigenFrame f = m.frame(c.phi);
  if (is_degenerate(f)) {
    c.tag = DirectionTag::degenerate;
    return c;
  }
  const int j0 = std::abs(f.a1) <= std::abs(f.a2) ? 1 : 2;
  if (std::abs(f.a(j0)) > kCouplingZeroTol) {
    c.tag = DirectionTag::parabolic;
    return c;
  }
  c.j0 = j0;
  c.a4_ok = check_A4(m, eta, j0);
  if (!c.a4_ok) {
    c.tag = DirectionTag::gamma_degenerate;
    return c;
  }
  c.tag = DirectionTag::hyperbolic;
  if (profiles) {
    c.vanishing_order = vanishing_order(*profiles, c.phi, j0);
  } else {
    c.vanishing_order = vanishing_order(coupling_profiles(m), c.phi, j0);
  }
  return c;
}

SpecialDirections find_special_directions(const Medium& m, int n_scan) {
  if (n_scan < 256 || !is_power_of_two(n_scan)) throw ValidationError("n_scan must be a power of two >= 256");
  const CircleSamples s = sample_circle(m, n_scan);
  SpecialDirections out;
  std::vector<double> roots;

  const auto gap = s.values([](const ElasticEigenFrame& f) { return f.kappa1 - f.kappa2; });
  double kmax = 0.0;
  for (const auto& f : s.frames) kmax = std::max({kmax, f.kappa1, f.kappa2});
  if (std::all_of(gap.begin(), gap.end(), [&](double g) { return std::abs(g) <= kDegenerateTol * kmax; })) {
    out.all_degenerate = true;
    return out;
  }
  const Scalar1D gap_f = [&m](double phi) {
    const auto f = m.frame(phi);
    return f.kappa1 - f.kappa2;
  };
  const auto deg = scan_roots(gap, gap_f, 1, [&m](double phi) { return is_degenerate(m.frame(phi)); });
  roots.insert(roots.end(), deg.begin(), deg.end());

  for (int j = 1; j <= 2; ++j) {
    const auto a = s.values([j](const ElasticEigenFrame& f) { return f.a(j); });
    // Decoupled: a_j below tolerance on a run of at least 1/64 of the circle.
    int run = 0, best = 0;
    for (int k = 0; k < 2 * n_scan; ++k) {
      run = std::abs(a[k % n_scan]) <= kCouplingZeroTol ? run + 1 : 0;
      best = std::max(best, std::min(run, n_scan));
    }
    if (best >= std::max(4, n_scan / 64)) {
      out.decoupled = true;
      out.decoupled_branch = j;
      continue;
    }
    const Scalar1D af = [&m, j](double phi) { return m.frame(phi).a(j); };
    const auto r = scan_roots(a, af, m.loop_sign(j), [&af](double phi) { return std::abs(af(phi)) < 1e-8; });
    roots.insert(roots.end(), r.begin(), r.end());
  }

  const CouplingProfiles profiles = coupling_profiles(m, std::max(1024, n_scan));
  for (double phi : merge_angles(roots)) {
    DirectionClass c = classify_direction(m, direction(phi), &profiles);
    if (c.tag == DirectionTag::parabolic) continue;  // an even-order candidate that refined away
    const int ell = c.vanishing_order ? c.vanishing_order->ell : 0;
    if (ell >= 2) {
      // A zero of order ell only resolves to ~eps^(1/ell) in a_j0 itself;
      // a_j0^(ell-1) has a simple zero there.
      const PeriodicSeries& a = profiles(c.j0);
      double x = phi;
      for (int it = 0; it < 8; ++it) {
        const double step = a.value(x, ell - 1) / a.value(x, ell);
        if (!std::isfinite(step) || std::abs(step) > 1e-4) break;
        x -= step;
        if (std::abs(step) < 1e-15) break;
      }
      x = wrap_angle(x);
      if (kTwoPi - x < 1e-12) x = 0.0;
      DirectionClass refined = classify_direction(m, direction(x), &profiles);
      if (refined.tag == c.tag && refined.vanishing_order && refined.vanishing_order->ell == ell) c = refined;
    }
    out.directions.push_back(c);
  }
  std::sort(out.directions.begin(), out.directions.end(),
            [](const DirectionClass& a, const DirectionClass& b) { return a.phi < b.phi; });
  return out;
}

}  // namespace te
