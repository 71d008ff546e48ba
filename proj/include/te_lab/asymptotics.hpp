// Closed-form asymptotic data for the spectrum of B(xi) and the two
// recursive diagonalisation schemes (|xi| -> 0 and |xi| -> infinity).
#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "te_lab/media.hpp"
#include "te_lab/symbol.hpp"

namespace te {

struct SmallFreqCoeffs {
  double nu_tilde1 = 0.0, nu_tilde2 = 0.0;  // nonzero eigenvalues of B1(eta), ascending
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;
};

struct LargeFreqCoeffs {
  cd drift0;  // nu0 = i kappa |xi|^2 + drift0 + O(1/|xi|)
  double im_shift1 = 0.0, im_shift2 = 0.0;
};

struct HyperbolicLimitData {
  int j0 = 0;
  double C = 0.0, D = 0.0;
  double gamma = 1.0, kappa = 1.0;
  // Limit of Im nu_pm / a_j0^2 as eta -> eta_bar at fixed |xi|.
  double im_ratio(double rho) const {
    const double d2 = D * D * rho * rho;
    return gamma * gamma / (2.0 * kappa) * d2 / (C * C + d2);
  }
};

// {0, +nu1~, -nu1~, +nu2~, -nu2~}.
std::array<double, 5> b1_spectrum(const Medium& m, const Vector2d& eta);
SmallFreqCoeffs small_freq_coeffs(const Medium& m, const Vector2d& eta);
LargeFreqCoeffs large_freq_coeffs(const Medium& m, const Vector2d& eta);

// Predicted eigenvalues in Branch order (nu0, nu1+, nu1-, nu2+, nu2-).
// Small |xi|: j refers to nu_j~; large |xi|: j refers to omega_j.
std::array<cd, 5> small_freq_prediction(const Medium& m, const Vector2d& xi);
std::array<cd, 5> large_freq_prediction(const Medium& m, const Vector2d& xi);

struct ExpansionRow {
  double rho = 0.0;
  Branch branch = Branch::nu0;
  cd exact, predicted;
  double residual = 0.0;
};
// Exact roots matched to the regime's prediction at every radius.
std::vector<ExpansionRow> expansion_table(const Medium& m, double phi, std::span<const double> radii, bool small);

struct SmallFreqDiagonalisation {
  std::vector<Vector5cd> D;  // D[j] multiplies |xi|^(j+1); D[0] = diag B1 ordering
  Matrix5cd R;               // B1(eta) = R diag(D[0]) R^{-1}
  Matrix5cd N;               // N_k
  double residual = 0.0;     // || N^{-1} R^{-1} B R N - sum |xi|^j D_j ||
};
SmallFreqDiagonalisation small_freq_diagonalize(const Medium& m, const Vector2d& xi, int k);

struct LargeFreqBlockDiagonalisation {
  // Block terms: block[n] multiplies |xi|^(2-n).
  std::vector<Matrix5cd> block;
  Matrix5cd M;                // M_k
  double block_residual = 0.0;
  // Step 2 on the 4x4 block: diag4[p] multiplies |xi|^(1-p).
  std::vector<Eigen::Vector4cd> diag4;
  Matrix5cd T;                // M_k * (N4 (+) 1)
  double residual = 0.0;      // after both steps
};
LargeFreqBlockDiagonalisation large_freq_blockdiag(const Medium& m, const Vector2d& xi, int k);

HyperbolicLimitData hyperbolic_limit_constants(const Medium& m, const Vector2d& eta_bar);

struct DegenerateModel {
  cd delta_minus, delta_plus;
};
// Eigenvalues of |xi| diag(w1, w2) + (i g^2 / 2 kappa) a a^T near an isolated
// degenerate direction; `cone` bounds the angular distance allowed.
DegenerateModel degenerate_model_eigenvalue(const Medium& m, const Vector2d& xi, double eta_bar_phi,
                                            double cone = 0.2);

// Lagrange extrapolation to h = 0 of g sampled at h = 1e-2, 1e-3, 1e-4.
double richardson_limit(const std::function<double(double)>& g);

// Eigenvalue of B(xi) nearest a target.
cd nearest_eigenvalue(const Medium& m, const Vector2d& xi, cd target);

struct RegimeRow {
  double rho = 0.0;
  std::string regime;  // "parabolic-small", "parabolic-large", "hyperbolic-small", ...
  Branch branch = Branch::nu0;
  cd nu;
  double ratio = 0.0;  // normalised imaginary part (see regime)
  double lower = 0.0, upper = 0.0;
  bool ok = true;
};
std::vector<RegimeRow> im_part_regimes(const Medium& m, const Vector2d& eta, std::span<const double> radii,
                                       double c = 1.0);

}  // namespace te
