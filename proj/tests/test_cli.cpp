#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using json = nlohmann::json;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream buf;
  buf << is.rdbuf();
  return buf.str();
}

fs::path scratch() {
  const fs::path dir = fs::path("cli_scratch");
  fs::create_directories(dir);
  return dir;
}

RunResult run_cli(const std::string& args) {
  const fs::path dir = scratch();
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + UMBILIC_CLI_PATH + "\" " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::vector<std::vector<double>> read_csv_rows(const fs::path& p) {
  std::ifstream is(p);
  std::string line;
  std::vector<std::vector<double>> rows;
  bool header = true;
  while (std::getline(is, line)) {
    if (header) {
      header = false;
      continue;
    }
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("profile subcommand writes the closed-form spherical profile") {
  const fs::path csv = scratch() / "p.csv";
  const RunResult r =
      run_cli("profile --space s --family sphere --c 1 --samples 100 --out " + csv.string());
  REQUIRE(r.code == 0);
  const json meta = json::parse(r.out);
  CHECK(meta["family"] == "sphere-spherical");
  CHECK(meta["c"] == 1.0);
  CHECK(meta["t0"] == "inf");

  const auto rows = read_csv_rows(csv);
  REQUIRE(rows.size() == 100);
  for (const auto& row : rows) {
    REQUIRE(row.size() == 4);
    const double s = row[0];
    CHECK(row[1] == Approx(std::sin(s)).margin(1e-9).epsilon(0.0));
    if (s <= 1.5) {
      CHECK(row[2] == Approx(-std::log(std::cos(s))).margin(1e-9).epsilon(0.0));
    }
  }
}

TEST_CASE("invalid arguments exit with code 2 and a reason") {
  RunResult r = run_cli("profile --space s --family sphere --c -1 --out " +
                        (scratch() / "bad.csv").string());
  CHECK(r.code == 2);
  CHECK(r.err.find("invalid arguments:") != std::string::npos);

  r = run_cli("profile --space h --family equidistant --c 1.5 --out " +
              (scratch() / "bad2.csv").string());
  CHECK(r.code == 2);

  r = run_cli("profile --family horosphere --out " + (scratch() / "bad3.csv").string());
  CHECK(r.code == 2);  // horosphere without --space h

  r = run_cli("profile --family custom --out " + (scratch() / "bad4.csv").string());
  CHECK(r.code == 2);  // custom without --lambda-csv

  r = run_cli("profile --bogus-flag 1");
  CHECK(r.code == 2);

  r = run_cli("build --space s --family sphere --dim 1 --out " + (scratch() / "bad5").string());
  CHECK(r.code == 2);
}

TEST_CASE("build exports the doubled sphere with its diameter") {
  const fs::path prefix = scratch() / "sph";
  const RunResult r = run_cli(
      "build --space s --family sphere --c 2 --dim 2 --grid 12 --chart 8 --out " + prefix.string());
  REQUIRE(r.code == 0);
  const json meta = json::parse(r.out);
  CHECK(meta["topology"] == "sphere");
  CHECK(meta["pieces"] == 2);
  CHECK(meta["vertical_diameter"].get<double>() == Approx(1.098612).margin(1e-6).epsilon(0.0));
  CHECK(fs::exists(prefix.string() + ".csv"));
  CHECK(fs::exists(prefix.string() + ".obj"));
  CHECK(json::parse(slurp(prefix.string() + ".json")) == meta);

  std::istringstream cloud(slurp(prefix.string() + ".csv"));
  std::string header;
  std::getline(cloud, header);
  CHECK(header == "s,chart_1,x_0,x_1,x_2,t,theta,k");
}

TEST_CASE("build reports the horosphere slab in dim 3") {
  const fs::path prefix = scratch() / "horo";
  const RunResult r = run_cli(
      "build --space h --family horosphere --c 1 --dim 3 --grid 8 --chart 6 --slices 3 --out " +
      prefix.string());
  REQUIRE(r.code == 0);
  const json meta = json::parse(r.out);
  CHECK(meta["topology"] == "ball");
  REQUIRE(meta.contains("slab"));
  CHECK(meta["slab"][0].get<double>() == Approx(-1.570796).margin(1e-6).epsilon(0.0));
  CHECK(meta["slab"][1].get<double>() == Approx(1.570796).margin(1e-6).epsilon(0.0));
  CHECK(fs::exists(prefix.string() + ".obj"));
}

TEST_CASE("build output is byte-identical across runs") {
  const std::string args = "build --space h --family sphere --c 1 --dim 2 --grid 10 --chart 6";
  const fs::path p1 = scratch() / "det1";
  const fs::path p2 = scratch() / "det2";
  REQUIRE(run_cli(args + " --out " + p1.string()).code == 0);
  REQUIRE(run_cli(args + " --out " + p2.string()).code == 0);
  CHECK(slurp(p1.string() + ".csv") == slurp(p2.string() + ".csv"));
  CHECK(slurp(p1.string() + ".obj") == slurp(p2.string() + ".obj"));
  CHECK(slurp(p1.string() + ".json") == slurp(p2.string() + ".json"));
}

TEST_CASE("verify passes honest graphs and fails perturbed ones") {
  RunResult r = run_cli("verify --space h --family sphere --c 1 --dim 2");
  REQUIRE(r.code == 0);
  json meta = json::parse(r.out);
  CHECK(meta["oracle"] == "flat");
  CHECK(meta["passed"] == true);
  CHECK(meta["excluded_near_seam"].get<int>() > 0);

  r = run_cli("verify --space h --family sphere --c 1 --dim 2 --perturb 0.01");
  CHECK(r.code == 1);
  meta = json::parse(r.out);
  CHECK(meta["passed"] == false);

  r = run_cli("verify --surface cylinder --space h --dim 2 --tol 1e-6");
  CHECK(r.code == 0);
}

TEST_CASE("warp transfers and classify reports without writing") {
  const fs::path prefix = scratch() / "weq";
  RunResult r = run_cli(
      "warp --space h --family equidistant --c 0.5 --dim 2 --grid 8 --chart 6 --omega t --out " +
      prefix.string());
  REQUIRE(r.code == 0);
  json meta = json::parse(r.out);
  CHECK(meta["omega"] == "t");
  CHECK(meta["topology"] == "ball");
  CHECK(meta["complete"] == false);
  CHECK(fs::exists(prefix.string() + ".csv"));

  r = run_cli(
      "classify --space s --family sphere --c 2 --dim 2 --grid 8 --chart 6 --omega const:1 "
      "--delta 0.4");
  REQUIRE(r.code == 0);
  meta = json::parse(r.out);
  CHECK(meta["topology"] == "annulus");
  CHECK(meta["complete"] == false);

  r = run_cli("classify --space s --family sphere --c 2 --dim 2 --grid 8 --chart 6 --omega e^-t");
  REQUIRE(r.code == 0);
  meta = json::parse(r.out);
  CHECK(meta["topology"] == "sphere");
  CHECK(meta["complete"] == true);
}

TEST_CASE("an out-of-image shift empties the slab with exit 4") {
  const fs::path prefix = scratch() / "dead";
  const RunResult r = run_cli(
      "warp --space s --family sphere --c 2 --dim 2 --grid 8 --chart 6 --omega const:1 "
      "--delta 0.4 --t-shift 50 --out " +
      prefix.string());
  CHECK(r.code == 4);
  CHECK(r.err.find("empty slab:") != std::string::npos);
  CHECK_FALSE(fs::exists(prefix.string() + ".csv"));
}

TEST_CASE("custom lambda tables flow through the cli") {
  const fs::path table = scratch() / "lam.csv";
  {
    std::ofstream os(table);
    os << "s,lambda\n";
    for (int i = 0; i <= 80; ++i) {
      const double s = -2.0 + 4.0 * i / 80.0;
      os << s << "," << -std::tanh(s) << "\n";
    }
  }
  const fs::path csv = scratch() / "custom.csv";
  const double c = 0.5 * std::cosh(2.0);
  std::ostringstream cmd;
  cmd << "profile --family custom --lambda-csv " << table.string() << " --c " << c
      << " --samples 50 --out " << csv.string();
  const RunResult r = run_cli(cmd.str());
  REQUIRE(r.code == 0);
  const json meta = json::parse(r.out);
  CHECK(meta["family"] == "custom");
  CHECK(read_csv_rows(csv).size() == 50);
}

TEST_CASE("config files feed options and reject unknown keys") {
  const fs::path cfg = scratch() / "profile.cfg";
  {
    std::ofstream os(cfg);
    os << "c=2.0\nsamples=25\n";
  }
  const fs::path csv = scratch() / "cfgrun.csv";
  RunResult r = run_cli("profile --space s --family sphere --config " + cfg.string() + " --out " +
                        csv.string());
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["c"] == 2.0);
  CHECK(read_csv_rows(csv).size() == 25);

  const fs::path bad = scratch() / "bad.cfg";
  {
    std::ofstream os(bad);
    os << "not_a_key=1\n";
  }
  r = run_cli("profile --space s --family sphere --config " + bad.string());
  CHECK(r.code == 2);
}
