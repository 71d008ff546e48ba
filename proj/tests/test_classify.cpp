#include <doctest.h>

#include "te_lab/classify.hpp"

using namespace te;

namespace {

bool near_angle(double a, double b, double tol = 1e-9) { return std::abs(angle_diff(a, b)) < tol; }

}  // namespace

TEST_SUITE("classify") {
  TEST_CASE("cubic(4,1,1) has eight simple hyperbolic directions") {
    const SpecialDirections s = find_special_directions(cubic_medium(4, 1, 1), 1024);
    CHECK_FALSE(s.decoupled);
    REQUIRE(s.count(DirectionTag::hyperbolic) == 8);
    CHECK(s.count(DirectionTag::degenerate) == 0);
    for (const auto& d : s.directions) {
      REQUIRE(d.vanishing_order);
      CHECK(d.vanishing_order->ell == 1);
      CHECK(std::abs(d.eta.norm() - 1.0) < 1e-14);
    }
    // axes and diagonals
    for (int k = 0; k < 8; ++k) CHECK(near_angle(s.directions[k].phi, k * kPi / 4));
  }

  TEST_CASE("rhombic(3,2,1,1) has a triple zero on the x-axis") {
    const SpecialDirections s = find_special_directions(rhombic_medium(3, 2, 1, 1), 1024);
    REQUIRE(s.directions.size() == 4);
    const int expected_ell[] = {3, 1, 3, 1};
    for (int k = 0; k < 4; ++k) {
      CHECK(s.directions[k].tag == DirectionTag::hyperbolic);
      CHECK(near_angle(s.directions[k].phi, k * kPi / 2, 1e-8));
      CHECK(s.directions[k].vanishing_order->ell == expected_ell[k]);
    }
    // Newton on a^(ell-1) pulls the triple zero well inside the bisection tolerance
    CHECK(std::abs(s.directions[0].phi) < 1e-12);
  }

  TEST_CASE("rhombic(4,2,1,1) has four simple hyperbolic directions") {
    const SpecialDirections s = find_special_directions(rhombic_medium(4, 2, 1, 1), 1024);
    REQUIRE(s.count(DirectionTag::hyperbolic) == 4);
    for (const auto& d : s.directions) CHECK(d.vanishing_order->ell == 1);
  }

  TEST_CASE("the census does not depend on the scan resolution") {
    const Medium m = rhombic_medium(3, 2, 1, 1);
    const auto a = find_special_directions(m, 256), b = find_special_directions(m, 4096);
    REQUIRE(a.directions.size() == b.directions.size());
    for (std::size_t k = 0; k < a.directions.size(); ++k) {
      CHECK(near_angle(a.directions[k].phi, b.directions[k].phi, 1e-8));
      CHECK(a.directions[k].vanishing_order->ell == b.directions[k].vanishing_order->ell);
    }
  }

  TEST_CASE("isotropic media decouple on the transverse branch") {
    for (const Medium& m : {isotropic_medium(1, 1), cubic_medium(3, 1, 1)}) {
      const SpecialDirections s = find_special_directions(m, 1024);
      CHECK(s.decoupled);
      CHECK(s.decoupled_branch == 1);
      CHECK(s.directions.empty());
    }
    const DirectionClass c = classify_direction(isotropic_medium(1, 1), direction(0.7));
    CHECK(c.tag == DirectionTag::hyperbolic);
    CHECK(c.vanishing_order->identically_vanishing);
  }

  TEST_CASE("weakly coupled cubic medium is degenerate on the diagonals") {
    const Medium m = cubic_medium(2, 1, -1);
    const SpecialDirections s = find_special_directions(m, 1024);
    CHECK(s.count(DirectionTag::degenerate) == 4);
    for (const auto& d : s.directions)
      if (d.tag == DirectionTag::degenerate) CHECK(near_angle(std::fmod(d.phi, kPi / 2), kPi / 4, 1e-8));
    CHECK(classify_direction(m, direction(kPi / 4)).tag == DirectionTag::degenerate);
    CHECK(classify_direction(m, direction(0.3)).tag == DirectionTag::parabolic);
  }

  TEST_CASE("fully degenerate medium is reported as such") {
    const SpecialDirections s = find_special_directions(cubic_medium(1, 1, -1), 512);
    CHECK(s.all_degenerate);
    CHECK(s.directions.empty());
  }

  TEST_CASE("gamma-degenerate directions fail the transversality check") {
    const Medium m = cubic_medium(1, 2, 0);
    const DirectionClass c = classify_direction(m, Vector2d::UnitX());
    CHECK(c.tag == DirectionTag::gamma_degenerate);
    CHECK_FALSE(c.a4_ok);
    CHECK_FALSE(check_A4(m, Vector2d::UnitX(), c.j0));
    CHECK(check_A4(cubic_medium(4, 1, 1), Vector2d::UnitX(), 1));
  }

  TEST_CASE("parabolic directions and vanishing orders") {
    const Medium m = cubic_medium(4, 1, 1);
    const DirectionClass p = classify_direction(m, direction(0.3));
    CHECK(p.tag == DirectionTag::parabolic);
    CHECK_FALSE(p.vanishing_order);
    const DirectionClass h = classify_direction(m, Vector2d::UnitY());
    CHECK(h.tag == DirectionTag::hyperbolic);
    CHECK(vanishing_order(m, Vector2d::UnitY(), h.j0).ell == 1);
    CHECK(vanishing_order(rhombic_medium(3, 2, 1, 1), Vector2d::UnitX(), 1).ell == 3);
  }

  TEST_CASE("inputs are validated") {
    CHECK_THROWS_AS(classify_direction(cubic_medium(4, 1, 1), Vector2d(1.0, 1.0)), ValidationError);
    CHECK_THROWS_AS(find_special_directions(cubic_medium(4, 1, 1), 100), ValidationError);
  }
}
