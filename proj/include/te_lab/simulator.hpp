// Periodic-grid solver for the Cauchy problem in Fourier space: exact per-mode
// propagation, micro-local filters, norm functionals and decay fits.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "te_lab/cutoff.hpp"
#include "te_lab/fit.hpp"
#include "te_lab/media.hpp"

namespace te {

struct GridSpec {
  int n = 512;
  double L = 200.0;
  bool dealias = false;  // drop modes with |k| > n/3 on either axis

  void validate() const;
  double cell() const { return L / n; }
  // Integer wavenumber of array index i, in [-n/2, n/2).
  int wavenumber(int i) const { return i < n / 2 ? i : i - n; }
  double xi(int i) const { return kTwoPi * wavenumber(i) / L; }
  double x(int i) const { return -0.5 * L + i * cell(); }
};

// Arrays are n x n with row index = y index, column index = x index.
using Grid2 = Eigen::MatrixXd;
using Field = std::array<Eigen::MatrixXcd, 5>;  // (+w1, +w2, -w1, -w2, theta)

struct CauchyData {
  std::array<Grid2, 2> U1, U2;  // x and y components
  Grid2 theta0;
  std::string preset = "custom";
};

// Every field a centred Gaussian exp(-|x|^2 / (2 s^2)), s = width_cells * L / n.
CauchyData gaussian_data(const GridSpec& g, double width_cells = 4.0);
// Compactly supported separable bump (1 - (x/r)^2)^4 (1 - (y/r)^2)^4 in every field.
CauchyData bump_data(const GridSpec& g, double radius_cells = 8.0);
CauchyData data_from_arrays(const std::array<Grid2, 5>& a);

// V(0, xi) = ((D_t + rho w) U0, (D_t - rho w) U0, theta_hat), U0 = M^T U_hat.
Field build_V0(const Medium& m, const CauchyData& data, const GridSpec& g);

// Frequency-side reconstructions: D_t U_hat, sqrt(A) U_hat (2 components
// each) and theta_hat.
struct EnergyParts {
  std::array<Eigen::MatrixXcd, 2> dtU, sqrtAU;
  Eigen::MatrixXcd theta;
};
EnergyParts energy_parts(const Medium& m, const Field& V, const GridSpec& g);
// Inverse of build_V0; the mean of U1 is not encoded in V and comes back 0.
CauchyData recover_data(const Medium& m, const Field& V0, const GridSpec& g);

// Mode-by-mode exp(i t B(xi)) without caching.
Field evolve(const Medium& m, const Field& V0, const GridSpec& g, double t);

// Spectral decomposition V0 = sum_k w_k per mode, reused for every time.
class Propagator {
 public:
  Propagator(const Medium& m, const GridSpec& g, const Field& V0);

  const GridSpec& grid() const { return grid_; }
  const Medium& medium() const { return medium_; }
  // Modes whose spectrum was too clustered for the spectral sum.
  int fallback_modes() const { return fallback_count_; }

  // Per-mode selection of eigen-components (bit k keeps eigenvalue k);
  // empty means all.
  using BranchMask = std::vector<std::uint8_t>;
  Field at(double t, const BranchMask& mask = {}) const;

  // Keeps the two eigenvalues continuing +-rho omega_j0 inside the cone
  // |eta - eta_bar| < 2 eps around phi_bar; other modes are dropped.
  BranchMask branch_mask(double phi_bar, int j0, double eps) const;

 private:
  struct Mode {
    int row = 0, col = 0;
    bool fallback = false;
    std::array<cd, 5> nu;
    std::array<Vector5cd, 5> w;
    Vector5cd v0;
  };
  Medium medium_;
  GridSpec grid_;
  Field zero_mode_;  // xi = 0 and negligible modes: constant in time
  std::vector<Mode> modes_;
  int fallback_count_ = 0;
};

enum class FilterPart { none, par, hyp, low, high };
struct FilterSpec {
  FilterPart cone = FilterPart::none;  // par / hyp / none
  FilterPart freq = FilterPart::none;  // low / high / none
  std::optional<double> branch_phi;    // branch:PHI
  double eps = 0.1;                    // angular cutoff scale
  double c = 0.5;                      // frequency split
  CutoffKind kind = CutoffKind::smoothstep;

  std::string name() const;
};
// "par", "hyp", "low", "high", "par+low", "hyp+high", "branch:PHI", "all".
FilterSpec parse_filter(const std::string& text);

// Scalar multiplier of a cone/frequency filter on the grid (zero at xi = 0
// unless the spec is "all").
Grid2 filter_weights(const Medium& m, const GridSpec& g, const FilterSpec& f);
Field microlocal_filter(const Medium& m, const Field& V, const GridSpec& g, const FilterSpec& f);

enum class Functional { sup, l2, energy };
Functional parse_functional(const std::string& s);
std::string to_string(Functional f);

struct FunctionalValue {
  double value = 0.0;
  double boundary_fraction = 0.0;  // share of |field|^2 in the outer band
};
FunctionalValue evaluate_functional(const Medium& m, const Field& V, const GridSpec& g, Functional f);

// sum over modes of |V|^2, and the dissipated energy sum 1/2 |V_1..4|^2 + |V_5|^2.
double plain_energy(const Field& V);
double weighted_energy(const Field& V);

std::vector<double> geometric_times(double tmin, double tmax, int count);

struct DecayMeasurement {
  std::vector<double> times, norms;
  Functional functional = Functional::sup;
  std::string filter;
  PowerLawFit fit;  // slope of log norm vs log t; exponent = -slope
  double exponent = 0.0;
  bool truncated = false;  // wrap-around cut the series short
  double last_reliable_time = 0.0;
};
inline constexpr double kWrapFraction = 0.01;

DecayMeasurement measure_decay(const Propagator& p, const FilterSpec& f, Functional fn,
                               const std::vector<double>& times);
DecayMeasurement measure_decay(const Medium& m, const CauchyData& data, const GridSpec& g, const FilterSpec& f,
                               Functional fn, const std::vector<double>& times);

// Scalar evolution by exp(i t nu_j0+(xi)) of theta0 restricted to the cone
// around phi_bar; sup-norm decay.
DecayMeasurement model_multiplier_decay(const Medium& m, double phi_bar, int j0, const CauchyData& data,
                                        const GridSpec& g, const std::vector<double>& times, double eps = 0.1);

// Worker count from TE_LAB_THREADS, default hardware concurrency.
int worker_count();

}  // namespace te
