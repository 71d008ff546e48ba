// The coupled 5x5 symbol B(xi), its characteristic quintic, spectrum,
// eigenprojections and per-mode propagator.
#pragma once

#include <array>
#include <span>
#include <string>

#include "te_lab/media.hpp"

namespace te {

// B(xi) in the ordering (+w1, +w2, -w1, -w2, theta).
struct SymbolMatrix {
  Vector2d xi = Vector2d::Zero();
  double rho = 0.0;  // |xi|
  ElasticEigenFrame frame;
  double gamma = 1.0, kappa = 1.0;
  Matrix5cd B, B1, B2;
};

SymbolMatrix assemble_B(const Medium& m, const Vector2d& xi);
// Same, from a precomputed frame at eta = xi / rho.
SymbolMatrix assemble_B(const Medium& m, double rho, const ElasticEigenFrame& frame);

// Coefficients c_0..c_5 of the monic characteristic polynomial, ascending.
Vector6cd char_quintic(const Medium& m, const Vector2d& xi);
Vector6cd char_quintic(const SymbolMatrix& s);
// The quintic in factored form; accurate near roots of any magnitude.
cd char_quintic_value(const SymbolMatrix& s, cd nu);

// Roots of the quintic: balanced companion eigensolve followed by Newton
// polishing on the factored form. Unordered.
std::array<cd, 5> quintic_roots(const SymbolMatrix& s);

enum class Branch { nu0, nu1_plus, nu1_minus, nu2_plus, nu2_minus };
std::string to_string(Branch b);

struct SpectrumReport {
  // eigenvalues[k] carries labels[k]; stored in the order of Branch.
  std::array<cd, 5> eigenvalues;
  std::array<Branch, 5> labels;
  std::array<double, 5> residuals;

  cd operator[](Branch b) const { return eigenvalues[static_cast<int>(b)]; }
};

// Labels come from continuation along the ray through xi, starting where
// |xi| is small enough that the roots sit next to |xi| * spec B1(eta).
SpectrumReport spectrum(const Medium& m, const Vector2d& xi);
SpectrumReport spectrum(const SymbolMatrix& s, const Medium& m);

// Relative "real eigenvalue" tolerance.
inline bool is_real_eigenvalue(cd nu) { return std::abs(nu.imag()) <= 1e-9 * (1.0 + std::abs(nu)); }

// Minimal distance between nu and the other entries of `eigenvalues`.
double eigen_gap(std::span<const cd> eigenvalues, int index);

// Product formula P = prod_{mu != nu} (B - mu) / (nu - mu).
Matrix5cd eigenprojection(const SymbolMatrix& s, int index, std::span<const cd> eigenvalues);
Matrix5cd eigenprojection(const SymbolMatrix& s, cd nu, const SpectrumReport& spec);

// exp(i t B): spectral sum when the spectrum is well separated, otherwise a
// Pade scaling-and-squaring exponential.
Matrix5cd propagator(const SymbolMatrix& s, double t);
bool spectrum_well_separated(std::span<const cd> eigenvalues);

// Matching of two 5-sets minimising the summed distance; perm[i] is the index
// in `b` matched to a[i].
std::array<int, 5> optimal_matching(const std::array<cd, 5>& a, const std::array<cd, 5>& b);

}  // namespace te
