#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "te_lab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return te::cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("te_lab_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string data(const std::string& f) { return std::string(TE_TEST_DATA) + "/" + f; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("classify writes the census") {
    const fs::path d = fresh_dir("classify");
    CHECK(run({"--medium", data("rhombic_3_2_1_1.cfg"), "--out", d.string(), "classify"}) == 0);
    const std::string csv = slurp(d / "classify.csv");
    CHECK(csv.rfind("phi,tag,j0,ell,a4_ok\n", 0) == 0);
    CHECK(csv.find("hyperbolic,1,3,") != std::string::npos);
  }

  TEST_CASE("outputs are byte-identical across runs") {
    const std::vector<std::vector<std::string>> cmds = {
        {"classify"}, {"spectrum", "--xi", "0.3,0.4"}, {"fresnel", "--sheet", "1"}, {"predict"}};
    for (const auto& cmd : cmds) {
      std::string first;
      for (int rep = 0; rep < 2; ++rep) {
        const fs::path d = fresh_dir("repeat" + std::to_string(rep));
        std::vector<std::string> args{"--medium", data("cubic_4_1_1.cfg"), "--out", d.string()};
        args.insert(args.end(), cmd.begin(), cmd.end());
        REQUIRE(run(args) == 0);
        std::string all;
        for (const auto& e : fs::directory_iterator(d)) all += e.path().filename().string() + slurp(e.path());
        if (rep == 0) {
          first = all;
        } else {
          CHECK(all == first);
        }
      }
    }
  }

  TEST_CASE("predict emits JSON with the global exponent") {
    const fs::path d = fresh_dir("predict");
    REQUIRE(run({"--medium", data("rhombic_3_2_1_1.cfg"), "--out", d.string(), "predict"}) == 0);
    const std::string j = slurp(d / "predict.json");
    CHECK(j.find("\"global_exponent\": 0.25") != std::string::npos);
  }

  TEST_CASE("expand reports regimes and residuals") {
    const fs::path d = fresh_dir("expand");
    CHECK(run({"--medium", data("cubic_4_1_1.cfg"), "--out", d.string(), "expand", "--direction", "0.3"}) == 0);
    CHECK(fs::exists(d / "expand.csv"));
    CHECK(fs::exists(d / "diagonalise.csv"));
    CHECK(fs::exists(d / "regimes.csv"));
  }

  TEST_CASE("simulate writes a decay series and fit") {
    const fs::path d = fresh_dir("simulate");
    CHECK(run({"--medium", data("cubic_3_1_1.cfg"), "--out", d.string(), "simulate", "--n", "64", "--L", "50",
               "--tmin", "1", "--tmax", "5", "--count", "4", "--filter", "hyp"}) == 0);
    CHECK(fs::exists(d / "decay.csv"));
    CHECK(slurp(d / "fit.txt").find("exponent") != std::string::npos);
  }

  TEST_CASE("invalid media exit 1 with error.txt") {
    const fs::path d = fresh_dir("bad");
    CHECK(run({"--medium", data("bad_cubic.cfg"), "--out", d.string(), "classify"}) == 1);
    const std::string e = slurp(d / "error.txt");
    CHECK(e.find("exit_code = 1") != std::string::npos);
    CHECK(e.find("λ < τ violated") != std::string::npos);
  }

  TEST_CASE("missing arguments are a usage error") {
    const fs::path d = fresh_dir("usage");
    CHECK(run({"--medium", data("cubic_4_1_1.cfg"), "--out", d.string(), "spectrum"}) == 1);
    CHECK(run({"--medium", data("nope.cfg"), "--out", d.string(), "classify"}) == 1);
  }
}
