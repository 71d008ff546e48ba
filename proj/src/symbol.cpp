#include "te_lab/symbol.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>
#include <unsupported/Eigen/Polynomials>

namespace te {

namespace {

constexpr cd kI{0.0, 1.0};

cd horner_derivative(const Vector6cd& c, cd nu) {
  cd d = 0.0;
  for (int k = 5; k >= 1; --k) d = d * nu + static_cast<double>(k) * c(k);
  return d;
}

double poly_scale(const Vector6cd& c, cd nu) {
  double s = 0.0, p = 1.0;
  for (int k = 0; k <= 5; ++k, p *= std::abs(nu)) s += std::abs(c(k)) * p;
  return s;
}

Vector5cd eigenvector(const Matrix5cd& b, cd nu) {
  const cd shift = nu + cd(1.0, 1.0) * 1e-13 * (1.0 + std::abs(nu));
  const Matrix5cd m = b - shift * Matrix5cd::Identity();
  Eigen::PartialPivLU<Matrix5cd> lu(m);
  Vector5cd x = Vector5cd::Ones();
  for (int it = 0; it < 2; ++it) {
    x = lu.solve(x);
    const double n = x.norm();
    if (!(n > 0.0) || !std::isfinite(n)) return Vector5cd::Unit(4);
    x /= n;
  }
  return x;
}

}  // namespace

std::string to_string(Branch b) {
  switch (b) {
    case Branch::nu0: return "nu0";
    case Branch::nu1_plus: return "nu1+";
    case Branch::nu1_minus: return "nu1-";
    case Branch::nu2_plus: return "nu2+";
    case Branch::nu2_minus: return "nu2-";
  }
  return "?";
}

SymbolMatrix assemble_B(const Medium& m, double rho, const ElasticEigenFrame& f) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ValidationError("xi must be nonzero and finite");
  SymbolMatrix s;
  s.rho = rho;
  s.xi = rho * f.eta;
  s.frame = f;
  s.gamma = m.gamma();
  s.kappa = m.kappa();

  const double g = s.gamma;
  const double w[4] = {f.omega1, f.omega2, -f.omega1, -f.omega2};
  const double a[4] = {f.a1, f.a2, f.a1, f.a2};
  s.B1.setZero();
  for (int i = 0; i < 4; ++i) {
    s.B1(i, i) = w[i] * rho;
    s.B1(i, 4) = kI * g * a[i] * rho;
    s.B1(4, i) = -0.5 * kI * g * a[i] * rho;
  }
  s.B2.setZero();
  s.B2(4, 4) = kI * s.kappa * rho * rho;
  s.B = s.B1 + s.B2;
  return s;
}

SymbolMatrix assemble_B(const Medium& m, const Vector2d& xi) {
  const double rho = xi.norm();
  if (!(rho > 0.0)) throw ValidationError("xi must be nonzero");
  return assemble_B(m, rho, m.frame(angle_of(xi)));
}

Vector6cd char_quintic(const SymbolMatrix& s) {
  const double r2 = s.rho * s.rho;
  const cd p = kI * s.kappa * r2;
  const double k1 = s.frame.kappa1 * r2, k2 = s.frame.kappa2 * r2;
  const double g2 = s.gamma * s.gamma * r2;
  const double g1a = g2 * s.frame.a1 * s.frame.a1, g2a = g2 * s.frame.a2 * s.frame.a2;
  Vector6cd c;
  c(5) = 1.0;
  c(4) = -p;
  c(3) = -(k1 + k2 + g1a + g2a);
  c(2) = p * (k1 + k2);
  c(1) = k1 * k2 + g1a * k2 + g2a * k1;
  c(0) = -p * k1 * k2;
  return c;
}

Vector6cd char_quintic(const Medium& m, const Vector2d& xi) { return char_quintic(assemble_B(m, xi)); }

cd char_quintic_value(const SymbolMatrix& s, cd nu) {
  const double r2 = s.rho * s.rho;
  const double k1 = s.frame.kappa1 * r2, k2 = s.frame.kappa2 * r2;
  const double g2 = s.gamma * s.gamma * r2;
  const cd n2 = nu * nu;
  return (nu - kI * s.kappa * r2) * (n2 - k1) * (n2 - k2) -
         nu * g2 * (s.frame.a1 * s.frame.a1 * (n2 - k2) + s.frame.a2 * s.frame.a2 * (n2 - k1));
}

std::array<cd, 5> quintic_roots(const SymbolMatrix& s) {
  const Vector6cd c = char_quintic(s);
  Eigen::PolynomialSolver<cd, 5> solver(c);
  std::array<cd, 5> r;
  for (int k = 0; k < 5; ++k) r[k] = solver.roots()(k);

  std::array<double, 5> resid{};
  bool ok = true;
  for (int k = 0; k < 5; ++k) {
    double gap = std::numeric_limits<double>::infinity();
    for (int l = 0; l < 5; ++l)
      if (l != k) gap = std::min(gap, std::abs(r[k] - r[l]));
    cd nu = r[k];
    cd f = char_quintic_value(s, nu);
    for (int it = 0; it < 4 && f != 0.0; ++it) {
      const cd df = horner_derivative(c, nu);
      if (df == 0.0) break;
      const cd step = f / df;
      if (std::abs(step) > 0.25 * gap) break;
      const cd next = nu - step;
      const cd fn = char_quintic_value(s, next);
      if (!(std::abs(fn) < std::abs(f))) break;
      nu = next;
      f = fn;
    }
    r[k] = nu;
    resid[k] = std::abs(f) / poly_scale(c, nu);
    if (!(resid[k] <= 1e-8)) ok = false;
  }
  if (!ok) {
    std::ostringstream os;
    os << "quintic root finder did not converge; relative residuals:";
    for (double v : resid) os << ' ' << v;
    throw NumericalError(os.str());
  }
  return r;
}

std::array<int, 5> optimal_matching(const std::array<cd, 5>& a, const std::array<cd, 5>& b) {
  std::array<int, 5> perm{0, 1, 2, 3, 4}, best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (int i = 0; i < 5; ++i) cost += std::abs(a[i] - b[perm[i]]);
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

SpectrumReport spectrum(const SymbolMatrix& s, const Medium& m) {
  const ElasticEigenFrame& f = s.frame;
  const double omega_min = std::min(f.omega1, f.omega2);
  const double rho_start = std::min(s.rho, 1e-3 * std::min(1.0, omega_min / s.kappa));

  // Anchor: roots at rho_start next to rho_start * spec B1(eta), sorted
  // ascending as (-nu2~, -nu1~, 0, nu1~, nu2~).
  const SymbolMatrix unit = assemble_B(m, 1.0, f);
  Eigen::ComplexEigenSolver<Matrix5cd> es(unit.B1, false);
  std::array<cd, 5> b1;
  for (int k = 0; k < 5; ++k) b1[k] = es.eigenvalues()(k).real();
  std::sort(b1.begin(), b1.end(), [](cd x, cd y) { return x.real() < y.real(); });
  constexpr Branch order[5] = {Branch::nu2_minus, Branch::nu1_minus, Branch::nu0, Branch::nu1_plus,
                               Branch::nu2_plus};

  std::array<cd, 5> cur;  // in Branch order
  {
    std::array<cd, 5> target;
    for (int k = 0; k < 5; ++k) target[k] = rho_start * b1[k];
    const auto roots = quintic_roots(assemble_B(m, rho_start, f));
    const auto perm = optimal_matching(target, roots);
    for (int k = 0; k < 5; ++k) cur[static_cast<int>(order[k])] = roots[perm[k]];
  }

  double rho = rho_start;
  std::array<cd, 5> prev = cur;
  double rho_prev = rho;
  bool have_prev = false;
  while (rho < s.rho) {
    const double next = std::min(s.rho, rho * 1.15);
    std::array<cd, 5> pred;
    for (int k = 0; k < 5; ++k) {
      pred[k] = have_prev ? cur[k] + (cur[k] - prev[k]) * ((next - rho) / (rho - rho_prev))
                          : cur[k] * (next / rho);
    }
    const auto roots = quintic_roots(next == s.rho ? s : assemble_B(m, next, f));
    const auto perm = optimal_matching(pred, roots);
    prev = cur;
    rho_prev = rho;
    for (int k = 0; k < 5; ++k) cur[k] = roots[perm[k]];
    rho = next;
    have_prev = true;
  }
  SpectrumReport rep;
  for (int k = 0; k < 5; ++k) {
    rep.eigenvalues[k] = cur[k];
    rep.labels[k] = static_cast<Branch>(k);
    const Vector5cd v = eigenvector(s.B, cur[k]);
    rep.residuals[k] = ((s.B - cur[k] * Matrix5cd::Identity()) * v).norm();
  }
  return rep;
}

SpectrumReport spectrum(const Medium& m, const Vector2d& xi) { return spectrum(assemble_B(m, xi), m); }

double eigen_gap(std::span<const cd> ev, int index) {
  double gap = std::numeric_limits<double>::infinity();
  for (int l = 0; l < static_cast<int>(ev.size()); ++l)
    if (l != index) gap = std::min(gap, std::abs(ev[index] - ev[l]));
  return gap;
}

Matrix5cd eigenprojection(const SymbolMatrix& s, int index, std::span<const cd> ev) {
  const cd nu = ev[index];
  const double gap = eigen_gap(ev, index);
  if (!(gap > 1e-6 * (1.0 + std::abs(nu)))) {
    std::ostringstream os;
    os << "eigenvalue " << nu << " is not simple (gap " << gap << "); use the propagator's exponential path";
    throw ValidationError(os.str());
  }
  Matrix5cd p = Matrix5cd::Identity();
  for (int l = 0; l < static_cast<int>(ev.size()); ++l) {
    if (l == index) continue;
    p = p * (s.B - ev[l] * Matrix5cd::Identity()) / (nu - ev[l]);
  }
  return p;
}

Matrix5cd eigenprojection(const SymbolMatrix& s, cd nu, const SpectrumReport& spec) {
  int index = 0;
  for (int k = 1; k < 5; ++k)
    if (std::abs(spec.eigenvalues[k] - nu) < std::abs(spec.eigenvalues[index] - nu)) index = k;
  return eigenprojection(s, index, spec.eigenvalues);
}

bool spectrum_well_separated(std::span<const cd> ev) {
  double numax = 0.0;
  for (cd v : ev) numax = std::max(numax, std::abs(v));
  for (int k = 0; k < static_cast<int>(ev.size()); ++k)
    if (!(eigen_gap(ev, k) > 1e-6 * (1.0 + numax))) return false;
  return true;
}

Matrix5cd propagator(const SymbolMatrix& s, double t) {
  if (t == 0.0) return Matrix5cd::Identity();
  std::array<cd, 5> ev;
  bool spectral = true;
  try {
    ev = quintic_roots(s);
    spectral = spectrum_well_separated(ev);
  } catch (const NumericalError&) {
    spectral = false;
  }
  if (spectral) {
    Matrix5cd u = Matrix5cd::Zero();
    for (int k = 0; k < 5; ++k) u += std::exp(kI * t * ev[k]) * eigenprojection(s, k, ev);
    return u;
  }
  const Matrix5cd a = (kI * t) * s.B;
  return a.exp();
}

}  // namespace te
