#include "te_lab/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace te {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ValidationError("cannot parse '" + t + "' as a number (" + what + ")");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

void expect_header(std::istream& in, const std::vector<std::string>& want) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty CSV");
  if (split_csv(line) != want) {
    std::string w;
    for (const auto& s : want) w += (w.empty() ? "" : ",") + s;
    throw ValidationError("CSV header must be '" + w + "'");
  }
}

}  // namespace

Medium parse_medium_config(std::istream& in, const std::filesystem::path& base_dir) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ValidationError("line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, value).second) throw ValidationError("duplicate key '" + key + "'");
  }

  if (!kv.count("kind")) throw ValidationError("medium config lacks 'kind'");
  const MediumKind kind = parse_medium_kind(kv.at("kind"));
  const double gamma = kv.count("gamma") ? to_double(kv.at("gamma"), "gamma") : 1.0;
  const double kappa = kv.count("kappa") ? to_double(kv.at("kappa"), "kappa") : 1.0;

  ParamMap params;
  std::string samples;
  for (const auto& [key, value] : kv) {
    if (key == "kind" || key == "gamma" || key == "kappa") continue;
    if (key.rfind("params.", 0) == 0) {
      params[key.substr(7)] = to_double(value, key);
    } else if (key == "samples" && kind == MediumKind::custom_sampled) {
      samples = value;
    } else {
      throw ValidationError("unknown key '" + key + "'");
    }
  }

  if (kind != MediumKind::custom_sampled) return make_medium(kind, params, gamma, kappa);
  if (!params.empty()) throw ValidationError("custom-sampled media take no params.* keys");
  if (samples.empty()) throw ValidationError("custom-sampled medium needs 'samples = <csv>'");
  std::filesystem::path p(samples);
  if (p.is_relative()) p = base_dir / p;
  std::ifstream f(p);
  if (!f) throw ValidationError("cannot open samples file " + p.string());
  return make_custom_medium(read_custom_samples(f), gamma, kappa);
}

Medium load_medium_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open medium config " + path.string());
  return parse_medium_config(f, path.parent_path());
}

std::vector<Matrix2cd> read_custom_samples(std::istream& in) {
  expect_header(in, {"phi", "a11_re", "a12_re", "a12_im", "a22_re"});
  std::vector<std::array<double, 5>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 5) throw ValidationError("custom sample row needs 5 columns: " + line);
    std::array<double, 5> r{};
    for (int i = 0; i < 5; ++i) r[i] = to_double(cells[i], "custom sample");
    rows.push_back(r);
  }
  const long n = static_cast<long>(rows.size());
  if (!is_power_of_two(n)) throw ValidationError("custom sample count must be a power of two");
  std::vector<Matrix2cd> out(n);
  for (long k = 0; k < n; ++k) {
    const auto& r = rows[k];
    if (std::abs(r[0] - kTwoPi * k / n) > 1e-9)
      throw ValidationError("custom sample " + std::to_string(k) + " is not at phi = 2 pi k / N");
    out[k] << cd(r[1], 0.0), cd(r[2], r[3]), cd(r[2], -r[3]), cd(r[4], 0.0);
  }
  return out;
}

std::array<Eigen::MatrixXd, 5> read_field_csv(std::istream& in, int n) {
  expect_header(in, {"u1x", "u1y", "u2x", "u2y", "theta"});
  std::array<Eigen::MatrixXd, 5> f;
  for (auto& m : f) m.setZero(n, n);
  std::string line;
  long idx = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 5) throw ValidationError("field row needs 5 columns: " + line);
    if (idx >= static_cast<long>(n) * n) throw ValidationError("field CSV has more than n*n rows");
    for (int c = 0; c < 5; ++c) f[c](idx / n, idx % n) = to_double(cells[c], "field value");
    ++idx;
  }
  if (idx != static_cast<long>(n) * n) throw ValidationError("field CSV must have exactly n*n rows");
  return f;
}

}  // namespace te
