#include <doctest.h>

#include <cmath>
#include <random>

#include "te_lab/fit.hpp"
#include "te_lab/spectral.hpp"
#include "te_lab/types.hpp"

using namespace te;

TEST_SUITE("spectral") {
  TEST_CASE("derivatives of a trigonometric polynomial are exact") {
    const int n = 64;
    std::vector<double> f(n);
    for (int k = 0; k < n; ++k) {
      const double x = kTwoPi * k / n;
      f[k] = 1.5 + std::sin(3 * x) - 0.25 * std::cos(7 * x);
    }
    const PeriodicSeries s(f);
    for (double x : {0.0, 0.3, 2.1, 5.9}) {
      CHECK(s.value(x) == doctest::Approx(1.5 + std::sin(3 * x) - 0.25 * std::cos(7 * x)).epsilon(1e-13));
      CHECK(s.value(x, 1) == doctest::Approx(3 * std::cos(3 * x) + 1.75 * std::sin(7 * x)).epsilon(1e-12));
      CHECK(s.value(x, 4) == doctest::Approx(81 * std::sin(3 * x) - 0.25 * 2401 * std::cos(7 * x)).epsilon(1e-11));
    }
    const auto d2 = s.derivative_samples(2);
    for (int k = 0; k < n; ++k) {
      const double x = kTwoPi * k / n;
      CHECK(d2[k] == doctest::Approx(-9 * std::sin(3 * x) + 0.25 * 49 * std::cos(7 * x)).epsilon(1e-11));
    }
    CHECK(s.max_abs_derivative(0) == doctest::Approx(2.75).epsilon(0.02));
    CHECK(s.tail_ratio() < 1e-12);
  }

  TEST_CASE("analytic non-polynomial data converges spectrally") {
    const int n = 256;
    std::vector<double> f(n);
    auto g = [](double x) { return 1.0 / (2.0 + std::cos(x)); };
    for (int k = 0; k < n; ++k) f[k] = g(kTwoPi * k / n);
    const PeriodicSeries s(f);
    // g' = sin / (2 + cos)^2
    for (double x : {0.1, 1.7, 4.0})
      CHECK(s.value(x, 1) == doctest::Approx(std::sin(x) / std::pow(2.0 + std::cos(x), 2)).epsilon(1e-12));
  }

  TEST_CASE("anti-periodic data uses half-integer modes") {
    const int n = 64;
    std::vector<double> f(n);
    for (int k = 0; k < n; ++k) f[k] = std::sin(0.5 * kTwoPi * k / n + 0.2);
    const PeriodicSeries s(f, true);
    CHECK(s.antiperiodic());
    for (double x : {0.0, 1.0, 3.0, 6.0}) {
      CHECK(s.value(x) == doctest::Approx(std::sin(0.5 * x + 0.2)).epsilon(1e-12));
      CHECK(s.value(x, 2) == doctest::Approx(-0.25 * std::sin(0.5 * x + 0.2)).epsilon(1e-12));
    }
  }

  TEST_CASE("sample count must be a power of two") {
    std::vector<double> f(12, 1.0);
    CHECK_THROWS_AS(PeriodicSeries{f}, ValidationError);
  }

  TEST_CASE("fft2 round trip and discrete Plancherel") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    Eigen::MatrixXcd a(32, 32);
    for (int i = 0; i < 32; ++i)
      for (int j = 0; j < 32; ++j) a(i, j) = {nd(rng), nd(rng)};
    Eigen::MatrixXcd b = a;
    fft2(b);
    CHECK(b.squaredNorm() / (32.0 * 32.0) == doctest::Approx(a.squaredNorm()).epsilon(1e-12));
    ifft2(b);
    CHECK((b - a).norm() <= 1e-12 * a.norm());
  }

  TEST_CASE("fft2 matches the direct DFT") {
    const int n = 8;
    Eigen::MatrixXcd a(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) a(r, c) = {std::sin(r + 0.3 * c), std::cos(r * c * 0.1)};
    Eigen::MatrixXcd b = a;
    fft2(b);
    for (int kr = 0; kr < n; ++kr) {
      for (int kc = 0; kc < n; ++kc) {
        std::complex<double> s = 0.0;
        for (int r = 0; r < n; ++r)
          for (int c = 0; c < n; ++c) s += a(r, c) * std::polar(1.0, -kTwoPi * (kr * r + kc * c) / n);
        CHECK(std::abs(b(kr, kc) - s) < 1e-12);
      }
    }
  }

  TEST_CASE("power-law fit recovers slope and standard error") {
    std::vector<double> x, y;
    for (int k = 1; k <= 10; ++k) {
      x.push_back(k);
      y.push_back(3.0 * std::pow(k, -0.75));
    }
    const PowerLawFit f = fit_loglog(x, y);
    CHECK(f.slope == doctest::Approx(-0.75).epsilon(1e-12));
    CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f.stderr_slope < 1e-12);
    CHECK(f.points == 10);
    // Noisy line: stderr from the textbook formula.
    const std::vector<double> xs{0, 1, 2, 3}, ys{0, 1.1, 1.9, 3.2};
    const PowerLawFit g = fit_linear(xs, ys);
    CHECK(g.slope == doctest::Approx(1.04).epsilon(1e-12));
    CHECK(g.stderr_slope == doctest::Approx(std::sqrt(0.042 / 2.0 / 5.0)).epsilon(1e-9));
  }
}
