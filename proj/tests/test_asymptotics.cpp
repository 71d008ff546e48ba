#include <doctest.h>

#include <vector>

#include "frozen_values.hpp"
#include "te_lab/asymptotics.hpp"
#include "te_lab/fit.hpp"

using namespace te;

TEST_SUITE("asymptotics") {
  TEST_CASE("small-frequency coefficients match the frozen limits") {
    const SmallFreqCoeffs c = small_freq_coeffs(cubic_medium(4, 1, 1), direction(0.3));
    CHECK(c.b0 == doctest::Approx(frozen::small_b0).epsilon(1e-12));
    CHECK(c.nu_tilde1 == doctest::Approx(frozen::small_nu_tilde1).epsilon(1e-12));
    CHECK(c.nu_tilde2 == doctest::Approx(frozen::small_nu_tilde2).epsilon(1e-12));
    CHECK(c.b1 == doctest::Approx(frozen::small_b1).epsilon(1e-9));
    CHECK(c.b2 == doctest::Approx(frozen::small_b2).epsilon(1e-11));
    // b0 + b1 + b1 + b2 + b2 = 1 (trace of the |xi|^2 term)
    CHECK(c.b0 + 2 * c.b1 + 2 * c.b2 == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("large-frequency shifts match the frozen limits") {
    const LargeFreqCoeffs c = large_freq_coeffs(cubic_medium(4, 1, 1), direction(0.3));
    CHECK(std::abs(c.drift0 - frozen::large_drift0) < 1e-12);
    CHECK(c.im_shift1 == doctest::Approx(frozen::large_im_shift1).epsilon(1e-10));
    CHECK(c.im_shift2 == doctest::Approx(frozen::large_im_shift2).epsilon(1e-12));
  }

  TEST_CASE("regime predictions track the exact roots") {
    const Medium m = cubic_medium(4, 1, 1);
    const std::vector<double> small{1e-3, 2e-3, 4e-3}, large{1e2, 2e2, 4e2};
    for (const auto& row : expansion_table(m, 0.3, small, true))
      CHECK(row.residual < 10.0 * std::pow(row.rho, 3));
    for (const auto& row : expansion_table(m, 0.3, large, false)) CHECK(row.residual < 10.0 / row.rho);
  }

  TEST_CASE("hyperbolic limit law matches the frozen ratios and a direct extrapolation") {
    const Medium m = cubic_medium(4, 1, 1);
    const HyperbolicLimitData h = hyperbolic_limit_constants(m, Vector2d::UnitX());
    CHECK(h.j0 == 1);
    const double radii[] = {0.5, 1.0, 2.0, 10.0};
    for (int k = 0; k < 4; ++k) {
      const double rho = radii[k];
      CHECK(h.im_ratio(rho) == doctest::Approx(frozen::hyperbolic_ratio_411[k]).epsilon(1e-12));
      const double lim = richardson_limit([&](double t) {
        const ElasticEigenFrame f = m.frame(t);
        const cd nu = nearest_eigenvalue(m, rho * direction(t), rho * f.omega(h.j0));
        return nu.imag() / (f.a(h.j0) * f.a(h.j0));
      });
      CHECK(lim == doctest::Approx(frozen::hyperbolic_ratio_411[k]).epsilon(1e-6));
    }
  }

  TEST_CASE("richardson extrapolation removes the linear and quadratic terms") {
    CHECK(richardson_limit([](double h) { return 2.0 + 3.0 * h - 5.0 * h * h; }) == doctest::Approx(2.0).epsilon(1e-13));
  }

  TEST_CASE("small-frequency diagonaliser residual scales like |xi|^(k+2)") {
    const Medium m = cubic_medium(4, 1, 1);
    const std::vector<double> radii{2e-3, 4e-3, 8e-3, 1.6e-2};
    for (int k = 1; k <= 3; ++k) {
      std::vector<double> res;
      for (double r : radii) res.push_back(small_freq_diagonalize(m, r * direction(0.3), k).residual);
      CHECK(fit_loglog(radii, res).slope == doctest::Approx(k + 2).epsilon(0.1));
    }
  }

  TEST_CASE("large-frequency block diagonaliser residual scales like |xi|^(1-k)") {
    const Medium m = cubic_medium(4, 1, 1);
    const std::vector<double> radii{50, 100, 200, 400};
    for (int k = 2; k <= 3; ++k) {
      std::vector<double> res;
      for (double r : radii) res.push_back(large_freq_blockdiag(m, r * direction(0.3), k).residual);
      CHECK(fit_loglog(radii, res).slope == doctest::Approx(1 - k).epsilon(0.1));
    }
    CHECK_THROWS_AS(large_freq_blockdiag(m, Vector2d(10, 0), 0), ValidationError);
  }

  TEST_CASE("degenerate direction model") {
    const Medium m = cubic_medium(2, 1, -1);
    const double phi_bar = kPi / 4;
    const ElasticEigenFrame fb = m.frame(phi_bar);
    CHECK(fb.a1 * fb.a1 == doctest::Approx(0.5).epsilon(1e-12));
    // the model captures the 2x2 block up to O(1/|xi|)
    double prev = 0.0;
    for (double rho : {50.0, 500.0}) {
      const Vector2d xi = rho * direction(phi_bar + 0.2 / rho);
      const DegenerateModel d = degenerate_model_eigenvalue(m, xi, phi_bar);
      const double err = std::max(std::abs(nearest_eigenvalue(m, xi, d.delta_minus) - d.delta_minus),
                                  std::abs(nearest_eigenvalue(m, xi, d.delta_plus) - d.delta_plus));
      if (prev > 0.0) CHECK(err < 0.2 * prev);
      prev = err;
    }
    CHECK_THROWS_AS(degenerate_model_eigenvalue(m, Vector2d(1, 0), phi_bar), ValidationError);
    CHECK_THROWS_AS(degenerate_model_eigenvalue(cubic_medium(4, 1, 1), direction(0.1), 0.1), ValidationError);
  }

  TEST_CASE("imaginary part regimes hold for parabolic and hyperbolic directions") {
    const std::vector<double> radii{1e-2, 0.1, 10.0, 100.0};
    for (const auto& r : im_part_regimes(cubic_medium(4, 1, 1), direction(0.3), radii)) CHECK(r.ok);
    for (const auto& r : im_part_regimes(cubic_medium(4, 1, 1), direction(1e-3), radii)) CHECK(r.ok);
    for (const auto& r : im_part_regimes(cubic_medium(4, 1, 1), Vector2d::UnitX(), radii)) {
      CHECK(r.regime == "hyperbolic-exact");
      CHECK(r.ok);
    }
  }

  TEST_CASE("gamma-degenerate directions are refused") {
    CHECK_THROWS_AS(small_freq_coeffs(cubic_medium(1, 2, 0), Vector2d::UnitX()), ValidationError);
  }
}
