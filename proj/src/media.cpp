#include "te_lab/media.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "te_lab/spectral.hpp"

namespace te {

namespace {

constexpr int kAtlasSize = 4096;
// Below this relative eigenvalue gap the eigenvectors of the 2x2 solve are
// not trusted and the frame is extrapolated from the left.
constexpr double kFrameDegenerateTol = 1e-6;
constexpr double kExtrapolationStep = 1e-4;

struct RawEigen {
  double k1, k2;  // ascending
  Vector2d v1, v2;
};

RawEigen raw_eigen(const Matrix2d& a) {
  Eigen::SelfAdjointEigenSolver<Matrix2d> es(a);
  return {es.eigenvalues()(0), es.eigenvalues()(1), es.eigenvectors().col(0), es.eigenvectors().col(1)};
}

bool near_degenerate(const RawEigen& r) {
  return r.k2 - r.k1 <= kFrameDegenerateTol * std::max(std::abs(r.k2), 1e-300);
}

Vector2d lex_positive(Vector2d v) {
  if (v.x() < -1e-12 || (std::abs(v.x()) <= 1e-12 && v.y() < 0.0)) v = -v;
  return v;
}

double param(const ParamMap& p, const std::string& name) { return p.at(name); }

void require_params(MediumKind kind, const ParamMap& p, std::initializer_list<const char*> names) {
  std::set<std::string> want(names.begin(), names.end());
  for (const auto& [k, v] : p) {
    if (!want.count(k)) throw ValidationError("unknown parameter '" + k + "' for " + to_string(kind) + " medium");
    if (!std::isfinite(v)) throw ValidationError("parameter '" + k + "' is not finite");
  }
  for (const auto& n : want)
    if (!p.count(n)) throw ValidationError("missing parameter '" + n + "' for " + to_string(kind) + " medium");
}

void check(bool ok, const std::string& inequality) {
  if (!ok) throw ValidationError(inequality + " violated");
}

}  // namespace

struct Medium::Impl {
  MediumKind kind;
  ParamMap params;
  double gamma = 1.0, kappa = 1.0;
  // custom-sampled entries
  std::optional<PeriodicSeries> c11, c12, c22;

  bool fully_degenerate = false;
  std::vector<ElasticEigenFrame> atlas;
  std::array<int, 2> loop{1, 1};

  Matrix2d symbol_at(double phi) const {
    const Vector2d eta = direction(phi);
    return symbol_eta(eta, phi);
  }

  Matrix2d symbol_eta(const Vector2d& eta, double phi) const {
    const double e1 = eta.x(), e2 = eta.y();
    Matrix2d a;
    switch (kind) {
      case MediumKind::isotropic: {
        const double l = params.at("lambda"), mu = params.at("mu");
        a = mu * Matrix2d::Identity() + (l + mu) * eta * eta.transpose();
        break;
      }
      case MediumKind::cubic: {
        const double t = params.at("tau"), mu = params.at("mu"), l = params.at("lambda");
        a << (t - mu) * e1 * e1 + mu, (l + mu) * e1 * e2, (l + mu) * e1 * e2, (t - mu) * e2 * e2 + mu;
        break;
      }
      case MediumKind::rhombic: {
        const double t1 = params.at("tau1"), t2 = params.at("tau2"), mu = params.at("mu"), l = params.at("lambda");
        a << (t1 - mu) * e1 * e1 + mu, (l + mu) * e1 * e2, (l + mu) * e1 * e2, (t2 - mu) * e2 * e2 + mu;
        break;
      }
      case MediumKind::custom_sampled: {
        const double off = c12->value(phi);
        a << c11->value(phi), off, off, c22->value(phi);
        break;
      }
    }
    return a;
  }

  ElasticEigenFrame assemble(double phi, double k1, double k2, const Vector2d& r1, const Vector2d& r2) const {
    ElasticEigenFrame f;
    f.phi = phi;
    f.eta = direction(phi);
    f.kappa1 = k1;
    f.kappa2 = k2;
    f.omega1 = std::sqrt(k1);
    f.omega2 = std::sqrt(k2);
    f.r1 = r1;
    f.r2 = r2;
    f.a1 = r1.dot(f.eta);
    f.a2 = r2.dot(f.eta);
    return f;
  }

  // Non-degenerate frame at phi with labels and signs taken from ref.
  ElasticEigenFrame matched(double phi, const RawEigen& r, const ElasticEigenFrame& ref) const {
    const double keep = std::abs(ref.r1.dot(r.v1)) + std::abs(ref.r2.dot(r.v2));
    const double swap = std::abs(ref.r1.dot(r.v2)) + std::abs(ref.r2.dot(r.v1));
    double k1 = r.k1, k2 = r.k2;
    Vector2d v1 = r.v1, v2 = r.v2;
    if (swap > keep) {
      std::swap(k1, k2);
      std::swap(v1, v2);
    }
    if (ref.r1.dot(v1) < 0.0) v1 = -v1;
    if (ref.r2.dot(v2) < 0.0) v2 = -v2;
    return assemble(phi, k1, k2, v1, v2);
  }

  // Quadratic extrapolation of the eigenvector branches from three samples;
  // eigenvalues are the Rayleigh quotients of the extrapolated vectors.
  ElasticEigenFrame extrapolated(double phi, const std::array<ElasticEigenFrame, 3>& s) const {
    Vector2d v1 = 3.0 * s[0].r1 - 3.0 * s[1].r1 + s[2].r1;
    Vector2d v2 = 3.0 * s[0].r2 - 3.0 * s[1].r2 + s[2].r2;
    v1.normalize();
    Vector2d perp(-v1.y(), v1.x());
    v2 = perp.dot(v2) >= 0.0 ? perp : Vector2d(-perp);
    const Matrix2d a = symbol_at(phi);
    return assemble(phi, v1.dot(a * v1), v2.dot(a * v2), v1, v2);
  }

  ElasticEigenFrame frame_from(double phi, const ElasticEigenFrame& ref) const {
    if (fully_degenerate) {
      // A is a multiple of the identity everywhere; the seed basis is constant.
      const Matrix2d a = symbol_at(phi);
      const Vector2d& r1 = atlas.front().r1;
      const Vector2d& r2 = atlas.front().r2;
      return assemble(phi, r1.dot(a * r1), r2.dot(a * r2), r1, r2);
    }
    const RawEigen r = raw_eigen(symbol_at(phi));
    if (!near_degenerate(r)) return matched(phi, r, ref);
    std::array<ElasticEigenFrame, 3> s;
    for (int i = 0; i < 3; ++i) {
      const double p = phi - (i + 1) * kExtrapolationStep;
      s[i] = matched(p, raw_eigen(symbol_at(p)), ref);
    }
    return extrapolated(phi, s);
  }

  void build_atlas() {
    int degenerate = 0;
    for (int k = 0; k < kAtlasSize; k += 8)
      if (near_degenerate(raw_eigen(symbol_at(kTwoPi * k / kAtlasSize)))) ++degenerate;
    fully_degenerate = degenerate == kAtlasSize / 8;

    atlas.resize(kAtlasSize);
    const RawEigen r0 = raw_eigen(symbol_at(0.0));
    if (fully_degenerate || !near_degenerate(r0)) {
      atlas[0] = assemble(0.0, r0.k1, r0.k2, lex_positive(r0.v1), lex_positive(r0.v2));
      if (fully_degenerate) atlas[0] = assemble(0.0, r0.k1, r0.k2, Vector2d::UnitX(), Vector2d::UnitY());
    } else {
      // Seed just after the crossing at phi = 0 and extrapolate back.
      const double p = 4.0 * kExtrapolationStep;
      const RawEigen rs = raw_eigen(symbol_at(p));
      const ElasticEigenFrame seed = assemble(p, rs.k1, rs.k2, lex_positive(rs.v1), lex_positive(rs.v2));
      std::array<ElasticEigenFrame, 3> s;
      for (int i = 0; i < 3; ++i) {
        const double q = (i + 1) * kExtrapolationStep;
        s[i] = matched(q, raw_eigen(symbol_at(q)), seed);
      }
      atlas[0] = extrapolated(0.0, s);
    }
    for (int k = 1; k < kAtlasSize; ++k) atlas[k] = frame_from(kTwoPi * k / kAtlasSize, atlas[k - 1]);

    if (fully_degenerate) return;
    // Close the loop: compare the continued frame at 2 pi with the seed.
    ElasticEigenFrame end = frame_from(kTwoPi, atlas.back());
    const double keep = std::abs(end.r1.dot(atlas[0].r1)) + std::abs(end.r2.dot(atlas[0].r2));
    const double swap = std::abs(end.r1.dot(atlas[0].r2)) + std::abs(end.r2.dot(atlas[0].r1));
    if (swap > keep) throw ValidationError("eigenvalue branches exchange after a full turn; medium not supported");
    loop[0] = end.r1.dot(atlas[0].r1) >= 0.0 ? 1 : -1;
    loop[1] = end.r2.dot(atlas[0].r2) >= 0.0 ? 1 : -1;
  }

  void check_positive() const {
    for (int k = 0; k < 64; ++k) {
      const double phi = kTwoPi * k / 64;
      const RawEigen r = raw_eigen(symbol_at(phi));
      if (!(r.k1 > 0.0)) {
        std::ostringstream os;
        os << "A(eta) is not positive definite at phi = " << phi;
        throw ValidationError(os.str());
      }
    }
  }
};

std::string to_string(MediumKind kind) {
  switch (kind) {
    case MediumKind::isotropic: return "isotropic";
    case MediumKind::cubic: return "cubic";
    case MediumKind::rhombic: return "rhombic";
    case MediumKind::custom_sampled: return "custom-sampled";
  }
  return "unknown";
}

MediumKind parse_medium_kind(const std::string& name) {
  if (name == "isotropic") return MediumKind::isotropic;
  if (name == "cubic") return MediumKind::cubic;
  if (name == "rhombic") return MediumKind::rhombic;
  if (name == "custom-sampled" || name == "custom_sampled" || name == "custom") return MediumKind::custom_sampled;
  throw ValidationError("unknown medium kind '" + name + "'");
}

MediumKind Medium::kind() const { return impl_->kind; }
const ParamMap& Medium::params() const { return impl_->params; }
double Medium::gamma() const { return impl_->gamma; }
double Medium::kappa() const { return impl_->kappa; }
Matrix2d Medium::symbol(double phi) const { return impl_->symbol_at(wrap_angle(phi)); }
int Medium::loop_sign(int j) const { return impl_->loop[j == 1 ? 0 : 1]; }

ElasticEigenFrame Medium::frame(double phi) const {
  const double w = wrap_angle(phi);
  const double step = kTwoPi / kAtlasSize;
  const int k = std::min(static_cast<int>(std::floor(w / step)), kAtlasSize - 1);
  const auto& ref = impl_->atlas[k];
  if (w == ref.phi) return ref;
  return impl_->frame_from(w, ref);
}

namespace {

void check_thermal(double gamma, double kappa) {
  check(std::isfinite(gamma) && gamma != 0.0, "γ ≠ 0");
  check(std::isfinite(kappa) && kappa > 0.0, "κ > 0");
}

}  // namespace

Medium make_medium(MediumKind kind, const ParamMap& p, double gamma, double kappa) {
  if (kind == MediumKind::custom_sampled)
    throw ValidationError("custom-sampled media are built from a sample table");
  check_thermal(gamma, kappa);
  switch (kind) {
    case MediumKind::isotropic: {
      require_params(kind, p, {"lambda", "mu"});
      const double l = param(p, "lambda"), mu = param(p, "mu");
      check(mu > 0.0, "μ > 0");
      check(l + mu > 0.0, "λ+μ > 0");
      break;
    }
    case MediumKind::cubic: {
      require_params(kind, p, {"tau", "mu", "lambda"});
      const double t = param(p, "tau"), mu = param(p, "mu"), l = param(p, "lambda");
      check(t > 0.0, "τ > 0");
      check(mu > 0.0, "μ > 0");
      check(-2.0 * mu - t < l, "−2μ−τ < λ");
      check(l < t, "λ < τ");
      break;
    }
    case MediumKind::rhombic: {
      require_params(kind, p, {"tau1", "tau2", "mu", "lambda"});
      const double t1 = param(p, "tau1"), t2 = param(p, "tau2"), mu = param(p, "mu"), l = param(p, "lambda");
      check(t1 > 0.0, "τ₁ > 0");
      check(t2 > 0.0, "τ₂ > 0");
      check(mu > 0.0, "μ > 0");
      const double s = std::sqrt(t1 * t2);
      check(-2.0 * mu - s < l, "−2μ−√(τ₁τ₂) < λ");
      check(l < s, "λ < √(τ₁τ₂)");
      break;
    }
    default: break;
  }
  auto impl = std::make_shared<Medium::Impl>();
  impl->kind = kind;
  impl->params = p;
  impl->gamma = gamma;
  impl->kappa = kappa;
  impl->check_positive();
  impl->build_atlas();
  return Medium(std::move(impl));
}

Medium make_custom_medium(const std::vector<Matrix2cd>& samples, double gamma, double kappa) {
  check_thermal(gamma, kappa);
  const long n = static_cast<long>(samples.size());
  if (n < 8 || !is_power_of_two(n)) throw ValidationError("custom medium needs a power-of-two sample count >= 8");
  std::vector<double> s11(n), s12(n), s22(n);
  for (long k = 0; k < n; ++k) {
    const Matrix2cd& a = samples[k];
    const double scale = a.cwiseAbs().maxCoeff() + 1e-300;
    if (!a.allFinite()) throw ValidationError("custom sample " + std::to_string(k) + " is not finite");
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw ValidationError("custom sample " + std::to_string(k) + " is not Hermitian");
    if (std::abs(a(0, 1).imag()) > 1e-12 * scale)
      throw ValidationError("custom sample " + std::to_string(k) +
                            " has a complex off-diagonal entry; only real symmetric symbols are supported");
    s11[k] = a(0, 0).real();
    s12[k] = a(0, 1).real();
    s22[k] = a(1, 1).real();
    if (!(s11[k] > 0.0 && s11[k] * s22[k] - s12[k] * s12[k] > 0.0))
      throw ValidationError("A(eta) is not positive definite at sample " + std::to_string(k));
  }
  auto impl = std::make_shared<Medium::Impl>();
  impl->kind = MediumKind::custom_sampled;
  impl->params = {{"N", static_cast<double>(n)}};
  impl->gamma = gamma;
  impl->kappa = kappa;
  impl->c11.emplace(s11, false, 0.0);
  impl->c12.emplace(s12, false, 0.0);
  impl->c22.emplace(s22, false, 0.0);
  impl->check_positive();
  impl->build_atlas();
  return Medium(std::move(impl));
}

Medium isotropic_medium(double lambda, double mu, double gamma, double kappa) {
  return make_medium(MediumKind::isotropic, {{"lambda", lambda}, {"mu", mu}}, gamma, kappa);
}

Medium cubic_medium(double tau, double mu, double lambda, double gamma, double kappa) {
  return make_medium(MediumKind::cubic, {{"tau", tau}, {"mu", mu}, {"lambda", lambda}}, gamma, kappa);
}

Medium rhombic_medium(double tau1, double tau2, double mu, double lambda, double gamma, double kappa) {
  return make_medium(MediumKind::rhombic, {{"tau1", tau1}, {"tau2", tau2}, {"mu", mu}, {"lambda", lambda}}, gamma,
                     kappa);
}

Matrix2d elastic_symbol(const Medium& m, const Vector2d& eta) {
  require_unit(eta);
  return m.symbol(angle_of(eta));
}

ElasticEigenFrame elastic_eigen(const Medium& m, const Vector2d& eta) {
  require_unit(eta);
  return m.frame(angle_of(eta));
}

std::pair<double, double> coupling(const Medium& m, const Vector2d& eta) {
  const ElasticEigenFrame f = elastic_eigen(m, eta);
  return {f.a1, f.a2};
}

CircleSamples sample_circle(const Medium& m, int n) {
  CircleSamples s;
  s.phi.resize(n);
  s.frames.resize(n);
  for (int k = 0; k < n; ++k) {
    s.phi[k] = kTwoPi * k / n;
    s.frames[k] = m.frame(s.phi[k]);
  }
  return s;
}

}  // namespace te
