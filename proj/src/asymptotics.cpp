#include "te_lab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "te_lab/classify.hpp"

namespace te {

namespace {

constexpr cd kI{0.0, 1.0};

int hyperbolic_index(const ElasticEigenFrame& f) {
  const int j = std::abs(f.a1) <= std::abs(f.a2) ? 1 : 2;
  return std::abs(f.a(j)) <= kCouplingZeroTol ? j : 0;
}

bool degenerate_frame(const ElasticEigenFrame& f) {
  return std::abs(f.kappa1 - f.kappa2) <= kDegenerateTol * std::max(f.kappa1, f.kappa2);
}

void require_not_gamma_degenerate(const Medium& m, const ElasticEigenFrame& f) {
  const int j0 = hyperbolic_index(f);
  if (j0 == 0 || degenerate_frame(f)) return;
  if (!check_A4(m, f.eta, j0)) {
    std::ostringstream os;
    os << "(A4) violated at phi = " << f.phi << ": gamma^2 = 2 kappa_" << j0 << " - trace A";
    throw ValidationError(os.str());
  }
}

// Roots s1 <= s2 of s^2 - (k1 + k2 + g^2) s + k1 k2 + g^2 (a1^2 k2 + a2^2 k1).
std::array<double, 2> b1_squares(const ElasticEigenFrame& f, double g2) {
  const double t = f.kappa1 + f.kappa2 + g2;
  const double p = f.kappa1 * f.kappa2 + g2 * (f.a1 * f.a1 * f.kappa2 + f.a2 * f.a2 * f.kappa1);
  const double disc = std::max(t * t - 4.0 * p, 0.0);
  const double hi = 0.5 * (t + std::sqrt(disc));
  return {p / hi, hi};
}

double frob(const Matrix5cd& m) { return m.norm(); }

double condition_number(const Matrix5cd& m) {
  Eigen::JacobiSVD<Matrix5cd> svd(m);
  const auto& s = svd.singularValues();
  return s(0) / s(4);
}

}  // namespace

std::array<double, 5> b1_spectrum(const Medium& m, const Vector2d& eta) {
  const ElasticEigenFrame f = elastic_eigen(m, eta);
  require_not_gamma_degenerate(m, f);
  const auto s = b1_squares(f, m.gamma() * m.gamma());
  const double n1 = std::sqrt(s[0]), n2 = std::sqrt(s[1]);
  return {0.0, n1, -n1, n2, -n2};
}

SmallFreqCoeffs small_freq_coeffs(const Medium& m, const Vector2d& eta) {
  const ElasticEigenFrame f = elastic_eigen(m, eta);
  require_not_gamma_degenerate(m, f);
  const double g2 = m.gamma() * m.gamma();
  const auto s = b1_squares(f, g2);

  SmallFreqCoeffs c;
  c.nu_tilde1 = std::sqrt(s[0]);
  c.nu_tilde2 = std::sqrt(s[1]);
  c.b0 = 1.0 / (1.0 + g2 * f.a1 * f.a1 / f.kappa1 + g2 * f.a2 * f.a2 / f.kappa2);

  const bool degenerate = degenerate_frame(f);
  const int j0 = degenerate ? 0 : hyperbolic_index(f);
  // The root sitting on kappa (degenerate) or kappa_j0 (hyperbolic) has b = 0.
  int zero_root = -1;
  if (degenerate) {
    zero_root = std::abs(s[0] - f.kappa1) <= std::abs(s[1] - f.kappa1) ? 0 : 1;
  } else if (j0 != 0) {
    zero_root = std::abs(s[0] - f.kappa(j0)) <= std::abs(s[1] - f.kappa(j0)) ? 0 : 1;
  }
  double b[2];
  for (int r = 0; r < 2; ++r) {
    if (r == zero_root) {
      b[r] = 0.0;
      continue;
    }
    double sum = 1.0;
    for (int i = 1; i <= 2; ++i) {
      if (i == j0) continue;
      const double d = s[r] - f.kappa(i);
      sum += g2 * f.a(i) * f.a(i) * (s[r] + f.kappa(i)) / (d * d);
    }
    b[r] = 1.0 / sum;
  }
  c.b1 = b[0];
  c.b2 = b[1];
  return c;
}

LargeFreqCoeffs large_freq_coeffs(const Medium& m, const Vector2d& eta) {
  const ElasticEigenFrame f = elastic_eigen(m, eta);
  const double g2 = m.gamma() * m.gamma();
  LargeFreqCoeffs c;
  c.drift0 = -kI * g2 / m.kappa();
  c.im_shift1 = g2 * f.a1 * f.a1 / (2.0 * m.kappa());
  c.im_shift2 = g2 * f.a2 * f.a2 / (2.0 * m.kappa());
  return c;
}

std::array<cd, 5> small_freq_prediction(const Medium& m, const Vector2d& xi) {
  const double rho = xi.norm();
  const SmallFreqCoeffs c = small_freq_coeffs(m, xi / rho);
  const double k = m.kappa(), r2 = rho * rho;
  return {kI * k * c.b0 * r2, rho * c.nu_tilde1 + kI * k * c.b1 * r2, -rho * c.nu_tilde1 + kI * k * c.b1 * r2,
          rho * c.nu_tilde2 + kI * k * c.b2 * r2, -rho * c.nu_tilde2 + kI * k * c.b2 * r2};
}

std::array<cd, 5> large_freq_prediction(const Medium& m, const Vector2d& xi) {
  const double rho = xi.norm();
  const ElasticEigenFrame f = m.frame(angle_of(xi));
  const LargeFreqCoeffs c = large_freq_coeffs(m, f.eta);
  return {kI * m.kappa() * rho * rho + c.drift0, rho * f.omega1 + kI * c.im_shift1, -rho * f.omega1 + kI * c.im_shift1,
          rho * f.omega2 + kI * c.im_shift2, -rho * f.omega2 + kI * c.im_shift2};
}

std::vector<ExpansionRow> expansion_table(const Medium& m, double phi, std::span<const double> radii, bool small) {
  const ElasticEigenFrame f = m.frame(phi);
  std::vector<ExpansionRow> rows;
  for (double rho : radii) {
    const Vector2d xi = rho * f.eta;
    const auto pred = small ? small_freq_prediction(m, xi) : large_freq_prediction(m, xi);
    const auto roots = quintic_roots(assemble_B(m, rho, f));
    const auto perm = optimal_matching(pred, roots);
    for (int k = 0; k < 5; ++k) {
      ExpansionRow r;
      r.rho = rho;
      r.branch = static_cast<Branch>(k);
      r.exact = roots[perm[k]];
      r.predicted = pred[k];
      r.residual = std::abs(r.exact - r.predicted);
      rows.push_back(r);
    }
  }
  return rows;
}

SmallFreqDiagonalisation small_freq_diagonalize(const Medium& m, const Vector2d& xi, int k) {
  if (k < 0 || k > 3) throw ValidationError("expansion order k must be in [0, 3]");
  const double rho = xi.norm();
  if (!(rho > 0.0)) throw ValidationError("xi must be nonzero");
  const ElasticEigenFrame f = m.frame(angle_of(xi));
  const auto target = b1_spectrum(m, f.eta);
  const SymbolMatrix unit = assemble_B(m, 1.0, f);

  Eigen::ComplexEigenSolver<Matrix5cd> es(unit.B1);
  std::array<cd, 5> ev, tgt;
  for (int i = 0; i < 5; ++i) {
    ev[i] = es.eigenvalues()(i);
    tgt[i] = target[i];
  }
  const auto perm = optimal_matching(tgt, ev);
  SmallFreqDiagonalisation out;
  Vector5cd d;
  for (int i = 0; i < 5; ++i) {
    d(i) = ev[perm[i]];
    out.R.col(i) = es.eigenvectors().col(perm[i]);
  }
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      if (std::abs(d(i) - d(j)) < 1e-8)
        throw ValidationError("eigenvalues of B1 are not distinct; the small-frequency scheme needs five");

  const Matrix5cd rinv = out.R.inverse();
  const Matrix5cd c1 = rinv * unit.B2 * out.R;

  std::vector<Matrix5cd> n(k + 1);
  std::vector<Vector5cd> lam(k + 1);
  n[0].setIdentity();
  lam[0] = d;
  for (int order = 1; order <= k; ++order) {
    Matrix5cd rt = c1 * n[order - 1];
    for (int q = 1; q < order; ++q) rt -= n[order - q] * lam[q].asDiagonal();
    lam[order] = rt.diagonal();
    n[order].setZero();
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        if (i != j) n[order](i, j) = rt(i, j) / (d(j) - d(i));
  }

  out.N.setZero();
  Matrix5cd approx = Matrix5cd::Zero();
  for (int order = 0; order <= k; ++order) {
    out.N += std::pow(rho, order) * n[order];
    approx += std::pow(rho, order + 1) * Matrix5cd(lam[order].asDiagonal());
  }
  if (condition_number(out.N) > 1e10) throw NumericalError("small-frequency transform N_k is ill-conditioned");
  out.D = lam;

  const Matrix5cd b0 = rinv * (rho * unit.B1 + rho * rho * unit.B2) * out.R;
  out.residual = frob(out.N.inverse() * b0 * out.N - approx);
  return out;
}

LargeFreqBlockDiagonalisation large_freq_blockdiag(const Medium& m, const Vector2d& xi, int k) {
  if (k < 1 || k > 3) throw ValidationError("expansion order k must be in [1, 3]");
  const double rho = xi.norm();
  if (!(rho > 0.0)) throw ValidationError("xi must be nonzero");
  const ElasticEigenFrame f = m.frame(angle_of(xi));
  const SymbolMatrix unit = assemble_B(m, 1.0, f);
  const double kappa = m.kappa();
  const double eps = 1.0 / rho;

  // Step 1: (4,1) block structure of K + eps B1 with K = i kappa e5 e5^T.
  std::vector<Matrix5cd> mm(k + 1), bl(k + 1);
  mm[0].setIdentity();
  bl[0] = unit.B2;
  for (int n = 1; n <= k; ++n) {
    Matrix5cd rt = unit.B1 * mm[n - 1];
    for (int q = 1; q < n; ++q) rt -= mm[n - q] * bl[q];
    bl[n] = rt;
    mm[n].setZero();
    for (int i = 0; i < 4; ++i) {
      bl[n](i, 4) = 0.0;
      bl[n](4, i) = 0.0;
      mm[n](i, 4) = -kI / kappa * rt(i, 4);
      mm[n](4, i) = kI / kappa * rt(4, i);
    }
  }

  LargeFreqBlockDiagonalisation out;
  out.block = bl;
  out.M.setZero();
  Matrix5cd block_approx = Matrix5cd::Zero();
  for (int n = 0; n <= k; ++n) {
    out.M += std::pow(eps, n) * mm[n];
    block_approx += std::pow(rho, 2 - n) * bl[n];
  }
  if (condition_number(out.M) > 1e10) throw NumericalError("large-frequency transform M_k is ill-conditioned");
  const Matrix5cd b = rho * unit.B1 + rho * rho * unit.B2;
  const Matrix5cd mb = out.M.inverse() * b * out.M;
  out.block_residual = frob(mb - block_approx);

  // Step 2: diagonalise rho (F0 + eps F1 + ...) with F_p the 4x4 block of bl[p+1].
  using M4 = Eigen::Matrix4cd;
  using V4 = Eigen::Vector4cd;
  std::vector<M4> fp(k);
  for (int p = 0; p < k; ++p) fp[p] = bl[p + 1].topLeftCorner<4, 4>();
  const V4 d = fp[0].diagonal();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::abs(d(i) - d(j)) < 1e-8)
        throw ValidationError("degenerate direction: the 4x4 step needs distinct omega_j; use degenerate_model_eigenvalue");

  std::vector<M4> n4(k);
  std::vector<V4> lam(k);
  n4[0].setIdentity();
  lam[0] = d;
  for (int n = 1; n < k; ++n) {
    M4 rt = M4::Zero();
    for (int p = 1; p <= n; ++p) rt += fp[p] * n4[n - p];
    for (int q = 1; q < n; ++q) rt -= n4[n - q] * lam[q].asDiagonal();
    lam[n] = rt.diagonal();
    n4[n].setZero();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) n4[n](i, j) = rt(i, j) / (d(j) - d(i));
  }
  M4 nsum = M4::Zero();
  V4 dsum = V4::Zero();
  for (int n = 0; n < k; ++n) {
    nsum += std::pow(eps, n) * n4[n];
    dsum += std::pow(rho, 1 - n) * lam[n];
  }
  out.diag4 = lam;

  Matrix5cd nfull = Matrix5cd::Identity();
  nfull.topLeftCorner<4, 4>() = nsum;
  out.T = out.M * nfull;
  Matrix5cd approx = Matrix5cd::Zero();
  approx.topLeftCorner<4, 4>() = dsum.asDiagonal();
  approx(4, 4) = block_approx(4, 4);
  out.residual = frob(out.T.inverse() * b * out.T - approx);
  return out;
}

HyperbolicLimitData hyperbolic_limit_constants(const Medium& m, const Vector2d& eta_bar) {
  const ElasticEigenFrame f = elastic_eigen(m, eta_bar);
  if (degenerate_frame(f)) throw ValidationError("hyperbolic limit constants need a non-degenerate direction");
  const int j0 = hyperbolic_index(f);
  if (j0 == 0) throw ValidationError("direction is not hyperbolic");
  const int jo = 3 - j0;
  const double g2 = m.gamma() * m.gamma();
  HyperbolicLimitData h;
  h.j0 = j0;
  h.gamma = m.gamma();
  h.kappa = m.kappa();
  h.C = (1.0 - g2 / (f.kappa(j0) - f.kappa(jo))) / g2;
  h.D = m.kappa() / (f.omega(j0) * g2);
  return h;
}

DegenerateModel degenerate_model_eigenvalue(const Medium& m, const Vector2d& xi, double eta_bar_phi, double cone) {
  const double rho = xi.norm();
  if (!(rho > 0.0)) throw ValidationError("xi must be nonzero");
  const double phi = angle_of(xi);
  if (std::abs(angle_diff(phi, eta_bar_phi)) > cone)
    throw ValidationError("xi is outside the conical neighbourhood of the degenerate direction");
  const ElasticEigenFrame fb = m.frame(eta_bar_phi);
  if (std::abs(fb.kappa1 - fb.kappa2) > 1e-6 * std::max(fb.kappa1, fb.kappa2))
    throw ValidationError("eta_bar is not a degenerate direction");

  const ElasticEigenFrame f = m.frame(phi);
  const double g2 = m.gamma() * m.gamma(), kappa = m.kappa();
  const double w1 = rho * f.omega1, w2 = rho * f.omega2;
  const cd z = 0.25 * (w1 - w2) * (w1 - w2) - g2 * g2 / (16.0 * kappa * kappa) +
               kI * g2 * (w1 - w2) * (f.a1 * f.a1 - f.a2 * f.a2) / (4.0 * kappa);
  // Branch continuous through z < 0, where the degenerate direction sits.
  const cd w = kI * std::sqrt(-z);
  const cd centre = 0.5 * (w1 + w2) + kI * g2 / (4.0 * kappa);
  return {centre - w, centre + w};
}

double richardson_limit(const std::function<double(double)>& g) {
  const double h[3] = {1e-2, 1e-3, 1e-4};
  double v[3];
  for (int i = 0; i < 3; ++i) v[i] = g(h[i]);
  double out = 0.0;
  for (int i = 0; i < 3; ++i) {
    double w = 1.0;
    for (int j = 0; j < 3; ++j)
      if (j != i) w *= h[j] / (h[j] - h[i]);
    out += w * v[i];
  }
  return out;
}

cd nearest_eigenvalue(const Medium& m, const Vector2d& xi, cd target) {
  const auto roots = quintic_roots(assemble_B(m, xi));
  return *std::min_element(roots.begin(), roots.end(),
                           [&](cd a, cd b) { return std::abs(a - target) < std::abs(b - target); });
}

std::vector<RegimeRow> im_part_regimes(const Medium& m, const Vector2d& eta, std::span<const double> radii,
                                       double c) {
  require_unit(eta);
  if (!(c > 0.0)) throw ValidationError("frequency split c must be positive");
  const ElasticEigenFrame f = m.frame(angle_of(eta));
  if (degenerate_frame(f)) throw ValidationError("im_part_regimes needs a non-degenerate direction");
  const int jmin = std::abs(f.a1) <= std::abs(f.a2) ? 1 : 2;
  const double amin = std::abs(f.a(jmin));
  const double g2 = m.gamma() * m.gamma(), kappa = m.kappa();

  std::vector<RegimeRow> rows;
  for (double rho : radii) {
    const bool small = rho <= c;
    const std::string band = small ? "small" : "large";
    const SymbolMatrix s = assemble_B(m, rho, f);
    const auto roots = quintic_roots(s);

    if (amin >= 0.1) {
      const auto pred = small ? small_freq_prediction(m, rho * f.eta) : large_freq_prediction(m, rho * f.eta);
      const auto perm = optimal_matching(pred, roots);
      const SmallFreqCoeffs sc = small_freq_coeffs(m, f.eta);
      const double b[5] = {sc.b0, sc.b1, sc.b1, sc.b2, sc.b2};
      for (int k = 0; k < 5; ++k) {
        RegimeRow r;
        r.rho = rho;
        r.regime = "parabolic-" + band;
        r.branch = static_cast<Branch>(k);
        r.nu = roots[perm[k]];
        if (small) {
          r.ratio = r.nu.imag() / (kappa * b[k] * rho * rho);
          r.lower = 0.5;
          r.upper = 2.0;
        } else {
          r.ratio = r.nu.imag();
          r.lower = 1e-12 * (1.0 + std::abs(r.nu));
          r.upper = std::numeric_limits<double>::infinity();
        }
        r.ok = r.ratio >= r.lower && r.ratio <= r.upper;
        rows.push_back(r);
      }
      continue;
    }

    for (int sign : {1, -1}) {
      RegimeRow r;
      r.rho = rho;
      r.branch = jmin == 1 ? (sign > 0 ? Branch::nu1_plus : Branch::nu1_minus)
                           : (sign > 0 ? Branch::nu2_plus : Branch::nu2_minus);
      const cd target = sign * rho * f.omega(jmin);
      r.nu = *std::min_element(roots.begin(), roots.end(),
                               [&](cd a, cd b) { return std::abs(a - target) < std::abs(b - target); });
      if (amin <= kCouplingZeroTol) {
        r.regime = "hyperbolic-exact";
        r.ratio = std::abs(r.nu.imag());
        r.lower = 0.0;
        r.upper = 1e-9 * (1.0 + std::abs(r.nu));
      } else {
        // Reference: the limit law with constants evaluated at eta.
        const double delta = f.kappa(jmin) - f.kappa(3 - jmin);
        const double cc = (1.0 - g2 / delta) / g2, dd = kappa / (f.omega(jmin) * g2);
        const double ref = g2 / (2.0 * kappa) * dd * dd * rho * rho / (cc * cc + dd * dd * rho * rho);
        r.regime = "hyperbolic-" + band;
        r.ratio = r.nu.imag() / (amin * amin * ref);
        r.lower = 0.5;
        r.upper = 2.0;
      }
      r.ok = r.ratio >= r.lower && r.ratio <= r.upper;
      rows.push_back(r);
    }
  }
  return rows;
}

}  // namespace te
