#include <doctest.h>

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "frozen_values.hpp"
#include "oracles.hpp"
#include "te_lab/symbol.hpp"

using namespace te;

namespace {

std::array<cd, 5> sorted(std::array<cd, 5> v) {
  std::sort(v.begin(), v.end(), [](cd a, cd b) {
    if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return v;
}

std::vector<Medium> builtins() {
  return {cubic_medium(3, 1, 1), cubic_medium(4, 1, 1), rhombic_medium(4, 2, 1, 1), rhombic_medium(3, 2, 1, 1),
          isotropic_medium(1, 1), cubic_medium(2, 1, -1), rhombic_medium(3, 2, 1, 1, 0.7, 2.0)};
}

}  // namespace

TEST_SUITE("symbol") {
  TEST_CASE("spectrum matches frozen high-precision values") {
    struct Case {
      Medium m;
      Vector2d xi;
      const std::array<cd, 5>* ref;
    };
    const Case cases[] = {{cubic_medium(4, 1, 1), {0.3, 0.4}, &frozen::cubic_411_a},
                          {rhombic_medium(3, 2, 1, 1), {2.0, -1.5}, &frozen::rhombic_3211_a},
                          {isotropic_medium(1, 1), {0.7, 0.2}, &frozen::isotropic_11_a},
                          {rhombic_medium(4, 2, 1, 1), {1.0, 0.0}, &frozen::rhombic_4211_axis}};
    for (const auto& c : cases) {
      const auto v = sorted(quintic_roots(assemble_B(c.m, c.xi)));
      for (int k = 0; k < 5; ++k) CHECK(std::abs(v[k] - (*c.ref)[k]) < 1e-12 * (1.0 + std::abs(v[k])));
    }
  }

  TEST_CASE("characteristic quintic matches the frozen expansion and Leverrier-Faddeev") {
    const Medium m = cubic_medium(4, 1, 1);
    const Vector2d xi(0.3, 0.4);
    const Vector6cd c = char_quintic(m, xi);
    for (int k = 0; k < 6; ++k) CHECK(std::abs(c(k) - frozen::cubic_411_a_charpoly[k]) < 1e-13);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (const Medium& med : builtins()) {
      for (int s = 0; s < 20; ++s) {
        const Vector2d x(u(rng), u(rng));
        const SymbolMatrix sm = assemble_B(med, x);
        const auto lf = oracle::leverrier_faddeev(sm.B);
        const Vector6cd q = char_quintic(sm);
        double scale = 0.0;
        for (int k = 0; k < 6; ++k) scale = std::max(scale, std::abs(lf[k]));
        for (int k = 0; k < 6; ++k) CHECK(std::abs(q(k) - lf[k]) < 1e-11 * scale);
        // factored evaluation agrees with the determinant oracle
        const cd z(0.37, -0.21);
        CHECK(std::abs(char_quintic_value(sm, z) - oracle::det(z * Matrix5cd::Identity() - sm.B)) <
              1e-11 * (1.0 + std::abs(oracle::det(z * Matrix5cd::Identity() - sm.B))));
      }
    }
  }

  TEST_CASE("roots agree with Aberth iteration and the dense eigensolver") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ang(0.0, kTwoPi), lr(-2.0, 2.0);
    for (const Medium& m : builtins()) {
      for (int s = 0; s < 40; ++s) {
        const Vector2d xi = std::pow(10.0, lr(rng)) * direction(ang(rng));
        const SymbolMatrix sm = assemble_B(m, xi);
        const auto r = quintic_roots(sm);
        const auto ab = oracle::aberth(oracle::leverrier_faddeev(sm.B));
        const auto ev = oracle::eigenvalues(sm.B);
        const auto p1 = oracle::match(r, ab), p2 = oracle::match(r, ev);
        for (int k = 0; k < 5; ++k) {
          CHECK(std::abs(r[k] - ab[p1[k]]) < 1e-8 * (1.0 + std::abs(r[k])));
          CHECK(std::abs(r[k] - ev[p2[k]]) < 1e-8 * (1.0 + std::abs(r[k])));
        }
      }
    }
  }

  TEST_CASE("trace and determinant identities") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ang(0.0, kTwoPi), lr(-2.0, 2.0);
    for (const Medium& m : builtins()) {
      for (int s = 0; s < 50; ++s) {
        const double rho = std::pow(10.0, lr(rng));
        const double phi = ang(rng);
        const auto r = quintic_roots(assemble_B(m, rho * direction(phi)));
        cd sum = 0.0, prod = 1.0;
        for (cd v : r) {
          sum += v;
          prod *= v;
        }
        const double k = m.kappa(), detA = m.symbol(phi).determinant();
        CHECK(std::abs(sum - cd(0, k * rho * rho)) <= 1e-8 * (1 + k * rho * rho));
        CHECK(std::abs(prod - cd(0, k * std::pow(rho, 6) * detA)) <= 1e-7 * (1 + k * std::pow(rho, 6) * detA));
      }
    }
  }

  TEST_CASE("eigenvalues are real exactly at hyperbolic directions") {
    const auto r = quintic_roots(assemble_B(rhombic_medium(4, 2, 1, 1), Vector2d(2.0, 0.0)));
    int real = 0;
    for (cd v : r) real += is_real_eigenvalue(v) ? 1 : 0;
    CHECK(real == 2);
    const auto p = quintic_roots(assemble_B(rhombic_medium(4, 2, 1, 1), 2.0 * direction(0.4)));
    for (cd v : p) CHECK(v.imag() > 1e-6);
  }

  TEST_CASE("spectrum labels follow the small-frequency ordering") {
    const Medium m = cubic_medium(4, 1, 1);
    for (double rho : {1e-3, 0.5, 5.0, 50.0}) {
      const SpectrumReport s = spectrum(m, rho * direction(0.3));
      CHECK(std::abs(s[Branch::nu0].real()) < 1e-9 * (1 + std::abs(s[Branch::nu0])));
      CHECK(s[Branch::nu1_plus].real() > 0.0);
      CHECK(s[Branch::nu2_plus].real() > s[Branch::nu1_plus].real());
      CHECK(std::abs(s[Branch::nu1_plus] + std::conj(s[Branch::nu1_minus])) < 1e-9 * (1 + rho * rho));
      for (double res : s.residuals) CHECK(res < 1e-8);
    }
  }

  TEST_CASE("projector algebra") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ang(0.0, kTwoPi), lr(-1.5, 1.5);
    for (const Medium& m : builtins()) {
      for (int s = 0; s < 20; ++s) {
        const SymbolMatrix sm = assemble_B(m, std::pow(10.0, lr(rng)) * direction(ang(rng)));
        const auto ev = quintic_roots(sm);
        if (!spectrum_well_separated(ev)) continue;
        Matrix5cd sum = Matrix5cd::Zero();
        for (int k = 0; k < 5; ++k) {
          const Matrix5cd p = eigenprojection(sm, k, ev);
          const double np = std::max(1.0, p.norm());
          CHECK((p * p - p).norm() < 1e-8 * np * np);
          CHECK((sm.B * p - ev[k] * p).norm() < 1e-8 * np * std::max(1.0, sm.B.norm()));
          sum += p;
        }
        CHECK((sum - Matrix5cd::Identity()).norm() < 1e-8);
      }
    }
  }

  TEST_CASE("projection onto a clustered eigenvalue is refused") {
    const SymbolMatrix sm = assemble_B(isotropic_medium(1, 1), Vector2d(1.0, 0.0));
    std::array<cd, 5> ev = quintic_roots(sm);
    ev[1] = ev[0] + 1e-9;
    CHECK_THROWS_AS(eigenprojection(sm, 0, ev), ValidationError);
  }

  TEST_CASE("propagator matches the matrix exponential and forms a group") {
    const Medium m = rhombic_medium(3, 2, 1, 1);
    for (const Vector2d& xi : {Vector2d(0.3, 0.1), Vector2d(-2.0, 1.0), Vector2d(1.0, 0.0)}) {
      const SymbolMatrix s = assemble_B(m, xi);
      const Matrix5cd ref = (cd(0, 1) * 2.5 * s.B).exp();
      CHECK((propagator(s, 2.5) - ref).norm() < 1e-9 * ref.norm());
      CHECK((propagator(s, 1.0) * propagator(s, 1.5) - propagator(s, 2.5)).norm() < 1e-9);
    }
  }

  TEST_CASE("optimal matching equals brute force") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> nd;
    for (int s = 0; s < 50; ++s) {
      std::array<cd, 5> a, b;
      for (int k = 0; k < 5; ++k) {
        a[k] = {nd(rng), nd(rng)};
        b[k] = {nd(rng), nd(rng)};
      }
      const auto p = optimal_matching(a, b), q = oracle::match(a, b);
      double cp = 0.0, cq = 0.0;
      for (int k = 0; k < 5; ++k) {
        cp += std::abs(a[k] - b[p[k]]);
        cq += std::abs(a[k] - b[q[k]]);
      }
      CHECK(cp == doctest::Approx(cq).epsilon(1e-14));
    }
  }

  TEST_CASE("zero frequency is rejected") {
    CHECK_THROWS_AS(assemble_B(cubic_medium(4, 1, 1), Vector2d(0.0, 0.0)), ValidationError);
  }
}
