#include <doctest.h>

#include "te_lab/decay.hpp"

using namespace te;

namespace {

DirectionClass hyperbolic(int ell, bool identically = false) {
  DirectionClass c;
  c.tag = DirectionTag::hyperbolic;
  c.j0 = 1;
  c.vanishing_order = VanishingOrder{ell, identically};
  return c;
}

}  // namespace

TEST_SUITE("decay") {
  TEST_CASE("per-direction exponents") {
    CHECK(predict_direction(hyperbolic(1), 2) == doctest::Approx(0.5));
    CHECK(predict_direction(hyperbolic(1), 4) == doctest::Approx(0.5));
    CHECK(predict_direction(hyperbolic(3), 4) == doctest::Approx(0.25));
    CHECK(predict_direction(hyperbolic(3), 8) == doctest::Approx(1.0 / 6));
    CHECK(predict_direction(hyperbolic(2), 3) == doctest::Approx(1.0 / 3));
    CHECK(predict_direction(hyperbolic(0, true), 2) == doctest::Approx(0.5));
  }

  TEST_CASE("exponent is non-increasing in both orders") {
    for (int ell = 1; ell <= 5; ++ell) {
      for (int g = 2; g <= 9; ++g) {
        const double e = predict_direction(hyperbolic(ell), g);
        CHECK(predict_direction(hyperbolic(ell + 1), g) <= e);
        CHECK(predict_direction(hyperbolic(ell), g + 1) <= e);
        CHECK(e <= 0.5);
      }
    }
  }

  TEST_CASE("invalid inputs are refused") {
    DirectionClass p;
    CHECK_THROWS_AS(predict_direction(p, 2), ValidationError);
    CHECK_THROWS_AS(predict_direction(hyperbolic(1), 1), ValidationError);
    CHECK_THROWS_AS(predict_global(cubic_medium(1, 1, -1)), ValidationError);
    CHECK_THROWS_AS(predict_global(cubic_medium(1, 2, 0)), ValidationError);
  }

  TEST_CASE("global predictions for the built-in media") {
    const DecayPrediction c = predict_global(cubic_medium(4, 1, 1));
    CHECK(c.per_direction.size() == 8);
    CHECK(c.global_exponent == doctest::Approx(0.5));
    CHECK_FALSE(c.decoupled);
    CHECK(c.parabolic_large_freq == "exp");

    const DecayPrediction r = predict_global(rhombic_medium(3, 2, 1, 1));
    REQUIRE(r.per_direction.size() == 4);
    CHECK(r.per_direction[0].gamma_bar == 4);
    CHECK(r.per_direction[0].exponent == doctest::Approx(0.25));
    CHECK(r.per_direction[1].exponent == doctest::Approx(0.5));
    CHECK(r.global_exponent == doctest::Approx(0.25));

    const DecayPrediction i = predict_global(isotropic_medium(1, 1));
    CHECK(i.decoupled);
    CHECK(i.decoupled_branch == 1);
    CHECK(i.decoupled_gamma_bar == 2);
    CHECK(i.global_exponent == doctest::Approx(0.5));
  }

  TEST_CASE("degenerate directions are listed but excluded") {
    const DecayPrediction d = predict_global(cubic_medium(2, 1, -1));
    int excluded = 0;
    for (const auto& p : d.per_direction) {
      if (p.cls.tag == DirectionTag::degenerate) {
        CHECK(p.excluded);
        ++excluded;
      }
    }
    CHECK(excluded == 4);
    CHECK(d.global_exponent <= 1.0);
  }
}
