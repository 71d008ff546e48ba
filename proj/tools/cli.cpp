#include "cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "te_lab/asymptotics.hpp"
#include "te_lab/classify.hpp"
#include "te_lab/config.hpp"
#include "te_lab/decay.hpp"
#include "te_lab/fresnel.hpp"
#include "te_lab/simulator.hpp"
#include "te_lab/symbol.hpp"

namespace te::cli {

namespace {

namespace fs = std::filesystem;

class RegimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream f(dir / name, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + (dir / name).string());
  return f;
}

struct Options {
  std::string medium;
  std::string out = ".";
  long seed = 0;
  int scan = 1024;
  std::vector<double> xi;
  double direction = 0.0;
  int kmax = 2;
  std::string regime = "small";
  int sheet = 1;
  int profile_n = 2048;
  int n = 512;
  double L = 200.0;
  double tmin = 5.0, tmax = 50.0;
  int count = 16;
  std::string filter = "all";
  std::string functional = "sup";
  double eps = 0.1, c = 0.5;
  double width = 4.0;
  std::string data;
  std::string cutoff = "smoothstep";
};

void cmd_classify(const Medium& m, const Options& o) {
  const SpecialDirections sd = find_special_directions(m, o.scan);
  auto f = open_out(o.out, "classify.csv");
  f << "phi,tag,j0,ell,a4_ok\n";
  if (sd.all_degenerate) f << ",all_degenerate,,,\n";
  if (sd.decoupled) f << ",decoupled," << sd.decoupled_branch << ",,\n";
  for (const auto& d : sd.directions) {
    f << num(d.phi) << ',' << to_string(d.tag) << ',';
    if (d.j0) f << d.j0;
    f << ',';
    if (d.vanishing_order) {
      if (d.vanishing_order->identically_vanishing)
        f << ">8";
      else if (d.vanishing_order->ell > 0)
        f << d.vanishing_order->ell;
    }
    f << ',';
    if (d.tag == DirectionTag::hyperbolic || d.tag == DirectionTag::gamma_degenerate) f << (d.a4_ok ? 1 : 0);
    f << '\n';
  }
}

void cmd_spectrum(const Medium& m, const Options& o) {
  const Vector2d xi(o.xi[0], o.xi[1]);
  const SpectrumReport s = spectrum(m, xi);
  auto f = open_out(o.out, "spectrum.csv");
  f << "xi1,xi2,re_nu,im_nu,label\n";
  for (int k = 0; k < 5; ++k)
    f << num(xi.x()) << ',' << num(xi.y()) << ',' << num(s.eigenvalues[k].real()) << ','
      << num(s.eigenvalues[k].imag()) << ',' << to_string(s.labels[k]) << '\n';
}

void cmd_expand(const Medium& m, const Options& o) {
  const bool small = o.regime == "small";
  std::vector<double> radii;
  for (int i = 0; i <= 8; ++i) radii.push_back(small ? std::pow(10.0, -3.0 + 0.25 * i) : std::pow(10.0, 1.0 + 0.25 * i));
  const auto rows = expansion_table(m, o.direction, radii, small);
  auto f = open_out(o.out, "expand.csv");
  f << "rho,branch,re_exact,im_exact,re_predicted,im_predicted,residual\n";
  for (const auto& r : rows)
    f << num(r.rho) << ',' << to_string(r.branch) << ',' << num(r.exact.real()) << ',' << num(r.exact.imag()) << ','
      << num(r.predicted.real()) << ',' << num(r.predicted.imag()) << ',' << num(r.residual) << '\n';

  const Vector2d eta = direction(o.direction);
  auto d = open_out(o.out, "diagonalise.csv");
  d << "rho,k,residual\n";
  for (int k = 1; k <= o.kmax; ++k) {
    for (double rho : radii) {
      const double res = small ? small_freq_diagonalize(m, rho * eta, k).residual
                               : large_freq_blockdiag(m, rho * eta, k).residual;
      d << num(rho) << ',' << k << ',' << num(res) << '\n';
    }
  }

  const auto regimes = im_part_regimes(m, eta, radii, 1.0);
  auto g = open_out(o.out, "regimes.csv");
  g << "rho,regime,branch,re_nu,im_nu,ratio,lower,upper,ok\n";
  int bad = 0;
  for (const auto& r : regimes) {
    g << num(r.rho) << ',' << r.regime << ',' << to_string(r.branch) << ',' << num(r.nu.real()) << ','
      << num(r.nu.imag()) << ',' << num(r.ratio) << ',' << num(r.lower) << ',' << num(r.upper) << ','
      << (r.ok ? 1 : 0) << '\n';
    bad += r.ok ? 0 : 1;
  }
  if (bad) throw RegimeFailure(std::to_string(bad) + " imaginary-part regime assertions failed; see regimes.csv");
}

void cmd_fresnel(const Medium& m, const Options& o) {
  const FresnelProfile p(m, o.sheet, o.profile_n);
  // Flagged: curvature-flat points and hyperbolic directions of this sheet.
  std::vector<double> flagged = flat_points(p);
  for (const auto& d : find_special_directions(m, 1024).directions)
    if (d.tag == DirectionTag::hyperbolic && d.j0 == o.sheet) flagged.push_back(d.phi);
  std::sort(flagged.begin(), flagged.end());

  struct Row {
    double phi;
    int order;
  };
  std::vector<Row> rows;
  for (int k = 0; k < 256; ++k) rows.push_back({kTwoPi * k / 256, 0});
  for (double phi : flagged) {
    if (p.crossing_near(phi)) continue;
    rows.push_back({phi, contact_order(p, phi).gamma_bar});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.phi < b.phi; });
  auto f = open_out(o.out, "fresnel.csv");
  f << "phi,omega_j,curvature_factor,contact_order_at_flagged_points\n";
  for (const auto& r : rows) {
    f << num(r.phi) << ',' << num(p.omega(r.phi)) << ',' << num(p.curvature_factor(r.phi)) << ',';
    if (r.order) f << r.order;
    f << '\n';
  }
}

void cmd_predict(const Medium& m, const Options& o) {
  const DecayPrediction p = predict_global(m, o.scan);
  nlohmann::ordered_json j;
  j["medium"] = to_string(m.kind());
  j["global_exponent"] = p.global_exponent;
  j["parabolic_small_freq"] = p.parabolic_small_freq;
  j["parabolic_large_freq"] = p.parabolic_large_freq;
  j["regularity"] = "r > " + num(p.regularity_factor) + "(1/p-1/q)";
  if (p.decoupled) {
    j["decoupled"] = {{"branch", p.decoupled_branch},
                      {"gamma_bar", p.decoupled_gamma_bar},
                      {"exponent", p.decoupled_exponent}};
  }
  auto dirs = nlohmann::ordered_json::array();
  for (const auto& d : p.per_direction) {
    nlohmann::ordered_json e;
    e["phi"] = d.cls.phi;
    e["tag"] = to_string(d.cls.tag);
    e["j0"] = d.cls.j0;
    if (d.excluded) {
      e["excluded"] = true;
    } else {
      const auto& v = *d.cls.vanishing_order;
      if (v.identically_vanishing)
        e["ell"] = ">8";
      else
        e["ell"] = v.ell;
      e["gamma_bar"] = d.gamma_bar;
      e["exponent"] = d.exponent;
    }
    dirs.push_back(e);
  }
  j["directions"] = dirs;
  auto f = open_out(o.out, "predict.json");
  f << j.dump(2) << '\n';
}

void cmd_simulate(const Medium& m, const Options& o) {
  const GridSpec g{o.n, o.L, false};
  g.validate();
  CauchyData data;
  if (o.data.empty()) {
    data = gaussian_data(g, o.width);
  } else {
    std::ifstream in(o.data);
    if (!in) throw ValidationError("cannot open data file " + o.data);
    data = data_from_arrays(read_field_csv(in, o.n));
  }
  FilterSpec fs = parse_filter(o.filter);
  fs.eps = o.eps;
  fs.c = o.c;
  fs.kind = o.cutoff == "bump" ? CutoffKind::bump : CutoffKind::smoothstep;
  const Functional fn = parse_functional(o.functional);
  const auto times = geometric_times(o.tmin, o.tmax, o.count);
  const DecayMeasurement d = measure_decay(m, data, g, fs, fn, times);

  auto f = open_out(o.out, "decay.csv");
  f << "t,norm,functional,filter\n";
  for (size_t k = 0; k < d.times.size(); ++k)
    f << num(d.times[k]) << ',' << num(d.norms[k]) << ',' << to_string(fn) << ',' << d.filter << '\n';
  auto t = open_out(o.out, "fit.txt");
  t << "slope = " << num(d.fit.slope) << '\n'
    << "stderr = " << num(d.fit.stderr_slope) << '\n'
    << "exponent = " << num(d.exponent) << '\n'
    << "points = " << d.fit.points << '\n'
    << "truncated = " << (d.truncated ? 1 : 0) << '\n'
    << "last_reliable_time = " << num(d.last_reliable_time) << '\n';
}

void write_error(const std::string& out, int code, const std::string& kind, const std::string& msg) {
  std::cerr << "error: " << msg << '\n';
  try {
    auto f = open_out(out, "error.txt");
    f << "exit_code = " << code << '\n' << "kind = " << kind << '\n' << "message = " << msg << '\n';
  } catch (const std::exception&) {
  }
}

}  // namespace

int run(int argc, char** argv) {
  Options o;
  CLI::App app{"thermo-elastic symbol laboratory"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--medium", o.medium, "medium config file")->required();
  app.add_option("--out", o.out, "output directory");
  app.add_option("--seed", o.seed, "seed for randomised sweeps")->check(CLI::NonNegativeNumber);

  auto* classify = app.add_subcommand("classify", "special directions");
  classify->add_option("--scan", o.scan, "scan resolution (power of two)")->check(CLI::Range(256, 1 << 20));
  auto* spec = app.add_subcommand("spectrum", "eigenvalues of B(xi)");
  spec->add_option("--xi", o.xi, "X1,X2")->required()->delimiter(',')->expected(2);
  auto* expand = app.add_subcommand("expand", "asymptotic expansions along a ray");
  expand->add_option("--direction", o.direction, "angle phi")->required();
  expand->add_option("--kmax", o.kmax, "diagonalisation order")->check(CLI::Range(1, 3));
  expand->add_option("--regime", o.regime)->check(CLI::IsMember({"small", "large"}));
  auto* fresnel = app.add_subcommand("fresnel", "Fresnel profile and contact orders");
  fresnel->add_option("--sheet", o.sheet)->required()->check(CLI::Range(1, 2));
  fresnel->add_option("--samples", o.profile_n, "profile size (power of two)")->check(CLI::Range(64, 1 << 16));
  auto* predict = app.add_subcommand("predict", "decay exponents");
  predict->add_option("--scan", o.scan)->check(CLI::Range(256, 1 << 20));
  auto* sim = app.add_subcommand("simulate", "Cauchy problem and decay fit");
  sim->add_option("--n", o.n)->check(CLI::Range(8, 4096));
  sim->add_option("--L", o.L)->check(CLI::PositiveNumber);
  sim->add_option("--tmin", o.tmin)->check(CLI::PositiveNumber);
  sim->add_option("--tmax", o.tmax)->check(CLI::PositiveNumber);
  sim->add_option("--count", o.count, "number of geometric times")->check(CLI::Range(2, 1000));
  sim->add_option("--filter", o.filter, "par, hyp, low, high, par+low, ..., branch:PHI, all");
  sim->add_option("--functional", o.functional)->check(CLI::IsMember({"sup", "l2", "energy"}));
  sim->add_option("--eps", o.eps, "angular cutoff scale")->check(CLI::Range(1e-6, 1.0));
  sim->add_option("--c", o.c, "frequency split")->check(CLI::PositiveNumber);
  sim->add_option("--width", o.width, "Gaussian width in grid cells")->check(CLI::PositiveNumber);
  sim->add_option("--data", o.data, "initial data CSV");
  sim->add_option("--cutoff", o.cutoff)->check(CLI::IsMember({"smoothstep", "bump"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    write_error(o.out, 1, "validation", e.what());
    return 1;
  }

  try {
    const Medium m = load_medium_config(o.medium);
    if (*classify) cmd_classify(m, o);
    if (*spec) cmd_spectrum(m, o);
    if (*expand) cmd_expand(m, o);
    if (*fresnel) cmd_fresnel(m, o);
    if (*predict) cmd_predict(m, o);
    if (*sim) cmd_simulate(m, o);
  } catch (const ValidationError& e) {
    write_error(o.out, 1, "validation", e.what());
    return 1;
  } catch (const NumericalError& e) {
    write_error(o.out, 2, "numerical", e.what());
    return 2;
  } catch (const RegimeFailure& e) {
    write_error(o.out, 3, "regime", e.what());
    return 3;
  } catch (const std::exception& e) {
    write_error(o.out, 2, "numerical", e.what());
    return 2;
  }
  return 0;
}

}  // namespace te::cli
