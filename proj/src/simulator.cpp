#include "te_lab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "te_lab/classify.hpp"
#include "te_lab/spectral.hpp"
#include "te_lab/symbol.hpp"

namespace te {

namespace {

constexpr cd kI{0.0, 1.0};

// Runs f(begin, end) on contiguous chunks of [0, count).
template <typename F>
void parallel_for(int count, F&& f) {
  const int workers = std::min(worker_count(), std::max(1, count / 16));
  if (workers <= 1) {
    f(0, count);
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int b = w * chunk, e = std::min(count, b + chunk);
    if (b < e) pool.emplace_back([&f, b, e] { f(b, e); });
  }
  for (auto& t : pool) t.join();
}

Eigen::MatrixXcd to_complex(const Grid2& a) { return a.cast<cd>(); }

Eigen::MatrixXcd fft_of(const Grid2& a) {
  Eigen::MatrixXcd c = to_complex(a);
  fft2(c);
  return c;
}

Eigen::MatrixXcd ifft_of(Eigen::MatrixXcd a) {
  ifft2(a);
  return a;
}

void require_grid_data(const Grid2& a, const GridSpec& g, const char* name) {
  if (a.rows() != g.n || a.cols() != g.n)
    throw ValidationError(std::string("field ") + name + " does not match the grid size");
  if (!a.allFinite()) throw ValidationError(std::string("field ") + name + " has non-finite entries");
}

Field zero_field(int n) {
  Field f;
  for (auto& c : f) c = Eigen::MatrixXcd::Zero(n, n);
  return f;
}

Vector5cd mode_vector(const Field& V, int r, int c) {
  Vector5cd v;
  for (int k = 0; k < 5; ++k) v(k) = V[k](r, c);
  return v;
}

void put_mode(Field& V, int r, int c, const Vector5cd& v) {
  for (int k = 0; k < 5; ++k) V[k](r, c) = v(k);
}

// Sum over rows in fixed order from per-row partials.
template <typename RowFn>
double ordered_row_sum(int rows, RowFn&& row_fn) {
  std::vector<double> part(rows, 0.0);
  parallel_for(rows, [&](int b, int e) {
    for (int r = b; r < e; ++r) part[r] = row_fn(r);
  });
  double s = 0.0;
  for (double p : part) s += p;
  return s;
}

bool in_boundary_band(const GridSpec& g, int r, int c) {
  const int band = std::max(1, g.n / 32);
  return r < band || c < band || r >= g.n - band || c >= g.n - band;
}

}  // namespace

int worker_count() {
  if (const char* env = std::getenv("TE_LAB_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void GridSpec::validate() const {
  if (n < 8 || !is_power_of_two(n)) throw ValidationError("grid n must be a power of two >= 8");
  if (!(L > 0.0) || !std::isfinite(L)) throw ValidationError("grid period L must be positive");
}

CauchyData gaussian_data(const GridSpec& g, double width_cells) {
  g.validate();
  const double s = width_cells * g.cell();
  Grid2 a(g.n, g.n);
  for (int r = 0; r < g.n; ++r)
    for (int c = 0; c < g.n; ++c) a(r, c) = std::exp(-(g.x(c) * g.x(c) + g.x(r) * g.x(r)) / (2.0 * s * s));
  CauchyData d{{a, a}, {a, a}, a, "gaussian"};
  return d;
}

CauchyData bump_data(const GridSpec& g, double radius_cells) {
  g.validate();
  const double rad = radius_cells * g.cell();
  auto b = [rad](double x) {
    const double u = x / rad;
    return std::abs(u) < 1.0 ? std::pow(1.0 - u * u, 4) : 0.0;
  };
  Grid2 a(g.n, g.n);
  for (int r = 0; r < g.n; ++r)
    for (int c = 0; c < g.n; ++c) a(r, c) = b(g.x(c)) * b(g.x(r));
  return CauchyData{{a, a}, {a, a}, a, "separable-bump"};
}

CauchyData data_from_arrays(const std::array<Grid2, 5>& a) {
  return CauchyData{{a[0], a[1]}, {a[2], a[3]}, a[4], "custom"};
}

Field build_V0(const Medium& m, const CauchyData& d, const GridSpec& g) {
  g.validate();
  require_grid_data(d.U1[0], g, "u1x");
  require_grid_data(d.U1[1], g, "u1y");
  require_grid_data(d.U2[0], g, "u2x");
  require_grid_data(d.U2[1], g, "u2y");
  require_grid_data(d.theta0, g, "theta");
  const std::array<Eigen::MatrixXcd, 2> u1{fft_of(d.U1[0]), fft_of(d.U1[1])};
  const std::array<Eigen::MatrixXcd, 2> u2{fft_of(d.U2[0]), fft_of(d.U2[1])};
  Field V = zero_field(g.n);
  V[4] = fft_of(d.theta0);
  const int third = g.n / 3;
  parallel_for(g.n, [&](int b, int e) {
    for (int r = b; r < e; ++r) {
      for (int c = 0; c < g.n; ++c) {
        if (g.dealias && (std::abs(g.wavenumber(r)) > third || std::abs(g.wavenumber(c)) > third)) {
          for (auto& comp : V) comp(r, c) = 0.0;
          continue;
        }
        const Vector2d xi(g.xi(c), g.xi(r));
        const double rho = xi.norm();
        const ElasticEigenFrame f = m.frame(rho > 0.0 ? angle_of(xi) : 0.0);
        const Eigen::Vector2cd U1(u1[0](r, c), u1[1](r, c)), U2(u2[0](r, c), u2[1](r, c));
        const Matrix2d Mt = f.diagonaliser().transpose();
        const Eigen::Vector2cd a = Mt * U1, b = Mt * U2;
        for (int j = 0; j < 2; ++j) {
          const double w = rho * f.omega(j + 1);
          V[j](r, c) = -kI * b(j) + w * a(j);
          V[j + 2](r, c) = -kI * b(j) - w * a(j);
        }
      }
    }
  });
  return V;
}

EnergyParts energy_parts(const Medium& m, const Field& V, const GridSpec& g) {
  EnergyParts p;
  for (auto& c : p.dtU) c = Eigen::MatrixXcd::Zero(g.n, g.n);
  for (auto& c : p.sqrtAU) c = Eigen::MatrixXcd::Zero(g.n, g.n);
  p.theta = V[4];
  parallel_for(g.n, [&](int b, int e) {
    for (int r = b; r < e; ++r) {
      for (int c = 0; c < g.n; ++c) {
        const Vector2d xi(g.xi(c), g.xi(r));
        const ElasticEigenFrame f = m.frame(xi.norm() > 0.0 ? angle_of(xi) : 0.0);
        const Matrix2d M = f.diagonaliser();
        const Eigen::Vector2cd vp(V[0](r, c), V[1](r, c)), vm(V[2](r, c), V[3](r, c));
        const Eigen::Vector2cd dt = M * (0.5 * (vp + vm)), sa = M * (0.5 * (vp - vm));
        for (int k = 0; k < 2; ++k) {
          p.dtU[k](r, c) = dt(k);
          p.sqrtAU[k](r, c) = sa(k);
        }
      }
    }
  });
  return p;
}

CauchyData recover_data(const Medium& m, const Field& V0, const GridSpec& g) {
  std::array<Eigen::MatrixXcd, 2> u1, u2;
  for (int k = 0; k < 2; ++k) {
    u1[k] = Eigen::MatrixXcd::Zero(g.n, g.n);
    u2[k] = Eigen::MatrixXcd::Zero(g.n, g.n);
  }
  for (int r = 0; r < g.n; ++r) {
    for (int c = 0; c < g.n; ++c) {
      const Vector2d xi(g.xi(c), g.xi(r));
      const double rho = xi.norm();
      const ElasticEigenFrame f = m.frame(rho > 0.0 ? angle_of(xi) : 0.0);
      Eigen::Vector2cd a, b;
      for (int j = 0; j < 2; ++j) {
        const cd vp = V0[j](r, c), vm = V0[j + 2](r, c);
        b(j) = kI * 0.5 * (vp + vm);  // U_t = i D_t U
        a(j) = rho > 0.0 ? (vp - vm) / (2.0 * rho * f.omega(j + 1)) : cd{};
      }
      const Eigen::Vector2cd U1 = f.diagonaliser() * a, U2 = f.diagonaliser() * b;
      for (int k = 0; k < 2; ++k) {
        u1[k](r, c) = U1(k);
        u2[k](r, c) = U2(k);
      }
    }
  }
  CauchyData d;
  for (int k = 0; k < 2; ++k) {
    d.U1[k] = ifft_of(u1[k]).real();
    d.U2[k] = ifft_of(u2[k]).real();
  }
  d.theta0 = ifft_of(V0[4]).real();
  d.preset = "recovered";
  return d;
}

Field evolve(const Medium& m, const Field& V0, const GridSpec& g, double t) {
  Field V = V0;
  parallel_for(g.n, [&](int b, int e) {
    for (int r = b; r < e; ++r) {
      for (int c = 0; c < g.n; ++c) {
        const Vector2d xi(g.xi(c), g.xi(r));
        if (xi.norm() == 0.0) continue;  // D_t U and theta means are constant
        const Vector5cd v = propagator(assemble_B(m, xi), t) * mode_vector(V0, r, c);
        put_mode(V, r, c, v);
      }
    }
  });
  return V;
}

Propagator::Propagator(const Medium& m, const GridSpec& g, const Field& V0)
    : medium_(m), grid_(g), zero_mode_(zero_field(g.n)) {
  g.validate();
  double vmax = 0.0;
  for (int r = 0; r < g.n; ++r)
    for (int c = 0; c < g.n; ++c) vmax = std::max(vmax, mode_vector(V0, r, c).norm());
  const double negligible = 1e-17 * vmax;

  std::vector<std::vector<Mode>> rows(g.n);
  std::vector<int> fallbacks(g.n, 0);
  parallel_for(g.n, [&](int b, int e) {
    for (int r = b; r < e; ++r) {
      for (int c = 0; c < g.n; ++c) {
        const Vector5cd v = mode_vector(V0, r, c);
        const Vector2d xi(g.xi(c), g.xi(r));
        if (xi.norm() == 0.0 || v.norm() <= negligible) {
          put_mode(zero_mode_, r, c, xi.norm() == 0.0 ? v : Vector5cd::Zero());
          continue;
        }
        Mode md;
        md.row = r;
        md.col = c;
        md.v0 = v;
        const SymbolMatrix s = assemble_B(m, xi);
        try {
          md.nu = quintic_roots(s);
          md.fallback = !spectrum_well_separated(md.nu);
        } catch (const NumericalError&) {
          md.fallback = true;
        }
        if (!md.fallback) {
          // P_k v = prod_{l != k} (B - nu_l) v / (nu_k - nu_l)
          for (int k = 0; k < 5; ++k) {
            Vector5cd w = v;
            for (int l = 0; l < 5; ++l)
              if (l != k) w = (s.B * w - md.nu[l] * w) / (md.nu[k] - md.nu[l]);
            md.w[k] = w;
          }
        } else {
          ++fallbacks[r];
        }
        rows[r].push_back(md);
      }
    }
  });
  for (int r = 0; r < g.n; ++r) {
    fallback_count_ += fallbacks[r];
    for (auto& md : rows[r]) modes_.push_back(std::move(md));
  }
}

Field Propagator::at(double t, const BranchMask& mask) const {
  Field V = zero_mode_;
  if (!mask.empty())
    for (auto& comp : V) comp.setZero();
  const int count = static_cast<int>(modes_.size());
  parallel_for(count, [&](int b, int e) {
    for (int i = b; i < e; ++i) {
      const Mode& md = modes_[i];
      const std::uint8_t bits = mask.empty() ? 0x1f : mask[i];
      if (bits == 0) continue;
      Vector5cd v = Vector5cd::Zero();
      if (md.fallback) {
        if (!mask.empty()) continue;  // branch split undefined at clustered spectra
        const Vector2d xi(grid_.xi(md.col), grid_.xi(md.row));
        v = propagator(assemble_B(medium_, xi), t) * md.v0;
      } else {
        for (int k = 0; k < 5; ++k)
          if (bits & (1u << k)) v += std::exp(kI * t * md.nu[k]) * md.w[k];
      }
      put_mode(V, md.row, md.col, v);
    }
  });
  return V;
}

Propagator::BranchMask Propagator::branch_mask(double phi_bar, int j0, double eps) const {
  BranchMask mask(modes_.size(), 0);
  const Vector2d eb = direction(phi_bar);
  for (size_t i = 0; i < modes_.size(); ++i) {
    const Mode& md = modes_[i];
    if (md.fallback) continue;
    const Vector2d xi(grid_.xi(md.col), grid_.xi(md.row));
    const double rho = xi.norm();
    if ((xi / rho - eb).norm() >= 2.0 * eps) continue;
    const double w = rho * medium_.frame(angle_of(xi)).omega(j0);
    for (double target : {w, -w}) {
      int best = 0;
      for (int k = 1; k < 5; ++k)
        if (std::abs(md.nu[k] - target) < std::abs(md.nu[best] - target)) best = k;
      mask[i] |= static_cast<std::uint8_t>(1u << best);
    }
  }
  return mask;
}

std::string FilterSpec::name() const {
  if (branch_phi) {
    std::ostringstream os;
    os << "branch:" << *branch_phi;
    return os.str();
  }
  std::string s;
  auto add = [&s](const char* p) { s += s.empty() ? p : std::string("+") + p; };
  if (cone == FilterPart::par) add("par");
  if (cone == FilterPart::hyp) add("hyp");
  if (freq == FilterPart::low) add("low");
  if (freq == FilterPart::high) add("high");
  return s.empty() ? "all" : s;
}

FilterSpec parse_filter(const std::string& text) {
  FilterSpec f;
  if (text.rfind("branch:", 0) == 0) {
    const std::string v = text.substr(7);
    try {
      size_t used = 0;
      f.branch_phi = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError("bad branch angle in filter '" + text + "'");
    }
    return f;
  }
  if (text == "all") return f;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, '+')) {
    FilterPart* slot = nullptr;
    FilterPart val = FilterPart::none;
    if (tok == "par" || tok == "hyp") {
      slot = &f.cone;
      val = tok == "par" ? FilterPart::par : FilterPart::hyp;
    } else if (tok == "low" || tok == "high") {
      slot = &f.freq;
      val = tok == "low" ? FilterPart::low : FilterPart::high;
    } else {
      throw ValidationError("unknown filter '" + tok + "' (expected par, hyp, low, high, branch:PHI or all)");
    }
    if (*slot != FilterPart::none) throw ValidationError("conflicting filter parts in '" + text + "'");
    *slot = val;
  }
  return f;
}

Grid2 filter_weights(const Medium& m, const GridSpec& g, const FilterSpec& f) {
  g.validate();
  if (!(f.eps > 0.0)) throw ValidationError("filter eps must be positive");
  if (!(f.c > 0.0)) throw ValidationError("frequency split c must be positive");

  std::vector<Vector2d> centres;
  bool all_hyperbolic = false;
  if (f.branch_phi) {
    centres.push_back(direction(*f.branch_phi));
  } else if (f.cone != FilterPart::none) {
    const SpecialDirections sd = find_special_directions(m, 1024);
    all_hyperbolic = sd.decoupled || sd.all_degenerate;
    for (const auto& d : sd.directions) centres.push_back(d.eta);
    double best = kTwoPi;
    int bi = -1, bj = -1;
    for (size_t i = 0; i < sd.directions.size(); ++i) {
      for (size_t j = i + 1; j < sd.directions.size(); ++j) {
        const double gap = std::abs(angle_diff(sd.directions[i].phi, sd.directions[j].phi));
        if (gap < best) {
          best = gap;
          bi = static_cast<int>(i);
          bj = static_cast<int>(j);
        }
      }
    }
    if (bi >= 0 && !(f.eps < 0.5 * best)) {
      std::ostringstream os;
      os << "eps = " << f.eps << " is not below half the gap between special directions phi = "
         << sd.directions[bi].phi << " and phi = " << sd.directions[bj].phi << " (gap " << best << ")";
      throw ValidationError(os.str());
    }
  }

  Grid2 w(g.n, g.n);
  for (int r = 0; r < g.n; ++r) {
    for (int c = 0; c < g.n; ++c) {
      const Vector2d xi(g.xi(c), g.xi(r));
      const double rho = xi.norm();
      if (rho == 0.0) {
        w(r, c) = f.name() == "all" ? 1.0 : 0.0;
        continue;
      }
      const Vector2d eta = xi / rho;
      double v = 1.0;
      if (f.branch_phi) {
        v = 1.0 - cutoff((eta - centres[0]).norm(), f.eps, 2.0 * f.eps, f.kind);
      } else if (f.cone != FilterPart::none) {
        double par = all_hyperbolic ? 0.0 : 1.0;
        for (const auto& e : centres) par *= cutoff((eta - e).norm(), f.eps, 2.0 * f.eps, f.kind);
        v = f.cone == FilterPart::par ? par : 1.0 - par;
      }
      if (f.freq != FilterPart::none) {
        const double hi = cutoff(rho, f.c, 2.0 * f.c, f.kind);
        v *= f.freq == FilterPart::high ? hi : 1.0 - hi;
      }
      w(r, c) = v;
    }
  }
  return w;
}

Field microlocal_filter(const Medium& m, const Field& V, const GridSpec& g, const FilterSpec& f) {
  const Grid2 w = filter_weights(m, g, f);
  Field out = V;
  for (auto& comp : out) comp = comp.cwiseProduct(w.cast<cd>());
  return out;
}

Functional parse_functional(const std::string& s) {
  if (s == "sup") return Functional::sup;
  if (s == "l2") return Functional::l2;
  if (s == "energy") return Functional::energy;
  throw ValidationError("unknown functional '" + s + "' (expected sup, l2 or energy)");
}

std::string to_string(Functional f) {
  switch (f) {
    case Functional::sup: return "sup";
    case Functional::l2: return "l2";
    case Functional::energy: return "energy";
  }
  return "?";
}

FunctionalValue evaluate_functional(const Medium& m, const Field& V, const GridSpec& g, Functional fn) {
  // Physical-space groups whose pointwise Euclidean norms enter the functional.
  std::vector<std::vector<Eigen::MatrixXcd>> groups;
  if (fn == Functional::energy) {
    const EnergyParts p = energy_parts(m, V, g);
    groups.push_back({ifft_of(p.dtU[0]), ifft_of(p.dtU[1])});
    groups.push_back({ifft_of(p.sqrtAU[0]), ifft_of(p.sqrtAU[1])});
    groups.push_back({ifft_of(p.theta)});
  } else {
    std::vector<Eigen::MatrixXcd> all;
    for (const auto& comp : V) all.push_back(ifft_of(comp));
    groups.push_back(std::move(all));
  }
  const int n = g.n;
  auto pointwise2 = [&](const std::vector<Eigen::MatrixXcd>& grp, int r, int c) {
    double s = 0.0;
    for (const auto& a : grp) s += std::norm(a(r, c));
    return s;
  };
  FunctionalValue out;
  double total = 0.0, band = 0.0;
  for (const auto& grp : groups) {
    double sup2 = 0.0;
    std::vector<double> tot_row(n, 0.0), band_row(n, 0.0), sup_row(n, 0.0);
    parallel_for(n, [&](int b, int e) {
      for (int r = b; r < e; ++r) {
        for (int c = 0; c < n; ++c) {
          const double v = pointwise2(grp, r, c);
          tot_row[r] += v;
          if (in_boundary_band(g, r, c)) band_row[r] += v;
          sup_row[r] = std::max(sup_row[r], v);
        }
      }
    });
    double t = 0.0, bsum = 0.0;
    for (int r = 0; r < n; ++r) {
      t += tot_row[r];
      bsum += band_row[r];
      sup2 = std::max(sup2, sup_row[r]);
    }
    total += t;
    band += bsum;
    out.value += fn == Functional::l2 ? std::sqrt(t * g.cell() * g.cell()) : std::sqrt(sup2);
  }
  out.boundary_fraction = total > 0.0 ? band / total : 0.0;
  return out;
}

double plain_energy(const Field& V) {
  const int rows = static_cast<int>(V[0].rows());
  return ordered_row_sum(rows, [&](int r) {
    double s = 0.0;
    for (const auto& comp : V) s += comp.row(r).squaredNorm();
    return s;
  });
}

double weighted_energy(const Field& V) {
  const int rows = static_cast<int>(V[0].rows());
  return ordered_row_sum(rows, [&](int r) {
    double s = V[4].row(r).squaredNorm();
    for (int k = 0; k < 4; ++k) s += 0.5 * V[k].row(r).squaredNorm();
    return s;
  });
}

std::vector<double> geometric_times(double tmin, double tmax, int count) {
  if (!(tmin > 0.0) || !(tmax > tmin)) throw ValidationError("times need 0 < tmin < tmax");
  if (count < 2) throw ValidationError("need at least two measurement times");
  std::vector<double> t(count);
  for (int k = 0; k < count; ++k) t[k] = tmin * std::pow(tmax / tmin, static_cast<double>(k) / (count - 1));
  return t;
}

namespace {

void finish_fit(DecayMeasurement& d) {
  d.fit = fit_loglog(d.times, d.norms);
  d.exponent = -d.fit.slope;
}

}  // namespace

DecayMeasurement measure_decay(const Propagator& p, const FilterSpec& f, Functional fn,
                               const std::vector<double>& times) {
  const GridSpec& g = p.grid();
  const Grid2 w = filter_weights(p.medium(), g, f);
  Propagator::BranchMask mask;
  if (f.branch_phi) {
    const DirectionClass cls = classify_direction(p.medium(), direction(*f.branch_phi));
    int j0 = cls.j0;
    if (j0 == 0) {
      const auto fr = p.medium().frame(*f.branch_phi);
      j0 = std::abs(fr.a1) <= std::abs(fr.a2) ? 1 : 2;
    }
    mask = p.branch_mask(*f.branch_phi, j0, f.eps);
  }
  const Eigen::MatrixXcd wc = w.cast<cd>();
  DecayMeasurement d;
  d.functional = fn;
  d.filter = f.name();
  for (double t : times) {
    Field V = p.at(t, mask);
    for (auto& comp : V) comp = comp.cwiseProduct(wc);
    const FunctionalValue v = evaluate_functional(p.medium(), V, g, fn);
    if (v.boundary_fraction > kWrapFraction) {
      d.truncated = true;
      break;
    }
    d.times.push_back(t);
    d.norms.push_back(v.value);
    d.last_reliable_time = t;
  }
  finish_fit(d);
  return d;
}

DecayMeasurement measure_decay(const Medium& m, const CauchyData& data, const GridSpec& g, const FilterSpec& f,
                               Functional fn, const std::vector<double>& times) {
  const Propagator p(m, g, build_V0(m, data, g));
  return measure_decay(p, f, fn, times);
}

DecayMeasurement model_multiplier_decay(const Medium& m, double phi_bar, int j0, const CauchyData& data,
                                        const GridSpec& g, const std::vector<double>& times, double eps) {
  g.validate();
  require_grid_data(data.theta0, g, "theta");
  if (j0 != 1 && j0 != 2) throw ValidationError("branch index must be 1 or 2");
  if (!(eps > 0.0) || eps > 0.5) throw ValidationError("cone eps must lie in (0, 0.5]");
  const ElasticEigenFrame fb = m.frame(phi_bar);
  if (std::abs(fb.a(j0)) > kCouplingZeroTol)
    throw ValidationError("a_" + std::to_string(j0) + " does not vanish at phi_bar = " + std::to_string(phi_bar));

  const Eigen::MatrixXcd f0 = fft_of(data.theta0);
  const Vector2d eb = direction(phi_bar);
  Eigen::MatrixXcd amp = Eigen::MatrixXcd::Zero(g.n, g.n), nu = Eigen::MatrixXcd::Zero(g.n, g.n);
  std::vector<int> failures(g.n, 0);
  parallel_for(g.n, [&](int b, int e) {
    for (int r = b; r < e; ++r) {
      for (int c = 0; c < g.n; ++c) {
        const Vector2d xi(g.xi(c), g.xi(r));
        const double rho = xi.norm();
        if (rho == 0.0) continue;
        const double wgt = 1.0 - cutoff((xi / rho - eb).norm(), eps, 2.0 * eps);
        if (wgt == 0.0) continue;
        const ElasticEigenFrame fr = m.frame(angle_of(xi));
        const auto roots = quintic_roots(assemble_B(m, rho, fr));
        const cd target = rho * fr.omega(j0);
        std::array<double, 5> dist;
        for (int k = 0; k < 5; ++k) dist[k] = std::abs(roots[k] - target);
        const int best = static_cast<int>(std::min_element(dist.begin(), dist.end()) - dist.begin());
        double second = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 5; ++k)
          if (k != best) second = std::min(second, dist[k]);
        if (!(second > 4.0 * dist[best])) ++failures[r];
        amp(r, c) = wgt * f0(r, c);
        nu(r, c) = roots[best];
      }
    }
  });
  int fail = 0;
  for (int x : failures) fail += x;
  if (fail > 0)
    throw NumericalError("branch continuation of nu_" + std::to_string(j0) + "+ is ambiguous at " +
                         std::to_string(fail) + " modes of the cone");

  DecayMeasurement d;
  d.functional = Functional::sup;
  d.filter = "multiplier:" + std::to_string(phi_bar);
  for (double t : times) {
    Eigen::MatrixXcd u = amp.cwiseProduct((kI * t * nu).array().exp().matrix());
    ifft2(u);
    double tot = 0.0, band = 0.0, sup2 = 0.0;
    for (int r = 0; r < g.n; ++r) {
      for (int c = 0; c < g.n; ++c) {
        const double v = std::norm(u(r, c));
        tot += v;
        sup2 = std::max(sup2, v);
        if (in_boundary_band(g, r, c)) band += v;
      }
    }
    if (tot > 0.0 && band / tot > kWrapFraction) {
      d.truncated = true;
      break;
    }
    d.times.push_back(t);
    d.norms.push_back(std::sqrt(sup2));
    d.last_reliable_time = t;
  }
  finish_fit(d);
  return d;
}

}  // namespace te
