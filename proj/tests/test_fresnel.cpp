#include <doctest.h>

#include <vector>

#include "frozen_values.hpp"
#include "oracles.hpp"
#include "te_lab/fresnel.hpp"

using namespace te;

TEST_SUITE("fresnel") {
  TEST_CASE("curvature factor derivatives match the frozen values") {
    const FresnelProfile p(rhombic_medium(3, 2, 1, 1), 1);
    for (int k = 0; k < 3; ++k)
      CHECK(p.factor_derivative(0.0, k) == doctest::Approx(frozen::rhombic_3211_factor_derivs[k]).scale(1.0).epsilon(1e-7));
    CHECK(contact_order(p, 0.0).gamma_bar == 4);
    CHECK(contact_order(p, kPi).gamma_bar == 4);
    CHECK(contact_order(p, kPi / 2).gamma_bar == 2);

    const FresnelProfile c(cubic_medium(4, 1, 1), 1);
    CHECK(c.curvature_factor(0.0) == doctest::Approx(frozen::cubic_411_factor_at_0).epsilon(1e-10));
    CHECK(c.omega(0.3, 2) == doctest::Approx(frozen::cubic_411_omega2_at_0p3).epsilon(1e-10));
    CHECK(curvature_factor(cubic_medium(4, 1, 1), 1, Vector2d::UnitX()) ==
          doctest::Approx(frozen::cubic_411_factor_at_0).epsilon(1e-10));
  }

  TEST_CASE("spectral derivatives agree with finite differences") {
    const Medium m = rhombic_medium(3, 2, 1, 1);
    const FresnelProfile p(m, 1, 8192);
    const auto& w = p.samples();
    for (int k = 0; k <= 4; ++k) {
      const double scale = std::max(1.0, p.max_abs_factor_derivative(k));
      for (int i : {0, 500, 1900, 4096, 7000}) {
        const double phi = kTwoPi * i / 8192;
        // 17-point stencil, h = 24 grid steps: truncation and round-off balance up to order 6
        const double fd = oracle::fd_derivative(w, i, k, 24, 8) + oracle::fd_derivative(w, i, k + 2, 24, 8);
        CHECK(std::abs(p.factor_derivative(phi, k) - fd) <= 1e-6 * scale);
      }
    }
  }

  TEST_CASE("a circle of radius omega has constant curvature factor") {
    const Medium m = isotropic_medium(1, 1);
    for (int j = 1; j <= 2; ++j) {
      const FresnelProfile p(m, j);
      for (double phi : {0.0, 1.0, 4.0}) {
        CHECK(p.curvature_factor(phi) == doctest::Approx(p.omega(phi)).epsilon(1e-12));
        CHECK(contact_order(p, phi).gamma_bar == 2);
      }
      CHECK(flat_points(p).empty());
    }
  }

  TEST_CASE("flat points bracket sign changes of the curvature factor") {
    const FresnelProfile p(rhombic_medium(3, 2, 1, 1), 1);
    const auto flats = flat_points(p);
    REQUIRE_FALSE(flats.empty());
    for (double phi : flats) {
      CHECK(std::abs(p.curvature_factor(phi)) < 1e-8 * p.max_abs_factor_derivative(0));
      if (std::abs(angle_diff(phi, 0.0)) > 0.1 && std::abs(angle_diff(phi, kPi)) > 0.1)
        CHECK(p.curvature_factor(phi - 1e-3) * p.curvature_factor(phi + 1e-3) < 0.0);
      CHECK(contact_order(p, phi).gamma_bar >= 3);
    }
  }

  TEST_CASE("contact orders are stable under refinement") {
    const Medium m = rhombic_medium(3, 2, 1, 1);
    for (int n : {1024, 2048, 4096}) {
      const FresnelProfile p(m, 1, n);
      CHECK(contact_order(p, 0.0).gamma_bar == 4);
      CHECK(contact_order(p, kPi / 2).gamma_bar == 2);
    }
  }

  TEST_CASE("curvature factor near a branch crossing is refused") {
    const Medium m = cubic_medium(2, 1, -1);
    CHECK_THROWS_AS(curvature_factor(m, 1, direction(kPi / 4 + 0.01)), ValidationError);
    CHECK_NOTHROW(curvature_factor(m, 1, direction(0.1)));
  }

  TEST_CASE("higher-order expansion around a simple hyperbolic direction") {
    const std::vector<double> small{0.02, 0.04, 0.08}, large{20.0, 40.0, 80.0};
    const Prop33Report r = verify_prop33(cubic_medium(4, 1, 1), Vector2d::UnitX(), 1, 1, small, large);
    CHECK(r.ell == 1);
    CHECK(r.continuation_ok);
    CHECK(r.c_im_small.slope == doctest::Approx(2.0).epsilon(0.1));
    CHECK(r.c_re_large.slope == doctest::Approx(-2.0).epsilon(0.15));
    for (const auto& row : r.rows) {
      CHECK(std::isfinite(row.max_ratio_re));
      CHECK(std::isfinite(row.max_ratio_im));
    }
  }
}
