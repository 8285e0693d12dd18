#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <umbilic/io.hpp>

using namespace umbilic;
using Catch::Approx;

namespace {

int count_lines_starting(const std::string& body, const std::string& prefix) {
  int count = 0;
  std::istringstream is(body);
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind(prefix, 0) == 0) ++count;
  }
  return count;
}

std::string first_line(const std::string& body) {
  return body.substr(0, body.find('\n'));
}

}  // namespace

TEST_CASE("profile csv layout and determinism") {
  const Profile pr = solve_profile(make_family(FamilyKind::SphereHyperbolic, 2), 1.0);
  std::ostringstream a, b;
  write_profile_csv(a, pr, 50);
  write_profile_csv(b, pr, 50);
  CHECK(a.str() == b.str());
  CHECK(first_line(a.str()) == "s,rho,phi,lambda");
  CHECK(count_lines_starting(a.str(), "") == 51);

  // last row sits at the seam: rho = 1, phi = t0
  std::string last;
  {
    std::istringstream is(a.str());
    std::string line;
    while (std::getline(is, line)) {
      if (!line.empty()) last = line;
    }
  }
  std::istringstream row(last);
  std::string cell;
  std::vector<double> vals;
  while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
  REQUIRE(vals.size() == 4);
  CHECK(vals[0] == Approx(pr.a).margin(1e-14).epsilon(0.0));
  CHECK(vals[1] == Approx(1.0).margin(1e-14).epsilon(0.0));
  CHECK(vals[2] == Approx(pr.t0).margin(1e-14).epsilon(0.0));
}

TEST_CASE("cloud csv lists every piece of the assembly") {
  AssembleOptions opt;
  opt.s_samples = 6;
  opt.chart_samples = 8;
  const AssembledHypersurface h =
      assemble(solve_profile(make_family(FamilyKind::SphereSpherical, 2), 2.0), opt);
  std::ostringstream os;
  write_cloud_csv(os, h);
  CHECK(first_line(os.str()) == "s,chart_1,x_0,x_1,x_2,t,theta,k");
  const int expected = static_cast<int>(h.pieces.size()) * h.patch.rows() * h.patch.cols();
  CHECK(count_lines_starting(os.str(), "") == expected + 1);
}

TEST_CASE("warped csv carries the conformal heights") {
  const AssembledHypersurface h =
      assemble(solve_profile(make_family(FamilyKind::SphereHyperbolic, 2), 1.0));
  const Warp w = make_warp(WarpKind::Identity);
  const WarpedHypersurface wh = pull_back(h, w);
  std::ostringstream os;
  write_warped_csv(os, h, wh);
  CHECK(first_line(os.str()) == "t,x_0,x_1,x_2");
  CHECK(count_lines_starting(os.str(), "") == static_cast<int>(wh.samples.size()) + 1);
}

TEST_CASE("obj surface mesh counts for a wrapped polar chart") {
  AssembleOptions opt;
  opt.s_samples = 6;
  opt.chart_samples = 8;
  const AssembledHypersurface h =
      assemble(solve_profile(make_family(FamilyKind::SphereSpherical, 2), 2.0), opt);
  std::ostringstream os;
  write_obj_surface(os, h);
  const int rows = h.patch.rows();
  const int cols = h.patch.cols();
  const int pieces = static_cast<int>(h.pieces.size());
  CHECK(count_lines_starting(os.str(), "v ") == pieces * rows * cols);
  CHECK(count_lines_starting(os.str(), "f ") == pieces * (rows - 1) * cols);

  // every face references valid vertices
  const int vmax = pieces * rows * cols;
  std::istringstream is(os.str());
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("f ", 0) != 0) continue;
    std::istringstream fs(line.substr(2));
    int idx = 0;
    while (fs >> idx) {
      CHECK(idx >= 1);
      CHECK(idx <= vmax);
    }
  }
}

TEST_CASE("obj export guards its dimension") {
  const AssembledHypersurface h2 =
      assemble(solve_profile(make_family(FamilyKind::SphereSpherical, 2), 2.0));
  const AssembledHypersurface h3 =
      assemble(solve_profile(make_family(FamilyKind::SphereSpherical, 3), 2.0));
  std::ostringstream os;
  CHECK_THROWS_AS(write_obj_surface(os, h3), invalid_spec);
  CHECK_THROWS_AS(write_obj_slices(os, h2, 4), invalid_spec);
  CHECK_THROWS_AS(write_obj_slices(os, h3, 0), invalid_spec);
}

TEST_CASE("obj slices carve a dim-3 assembly along the last chart angle") {
  AssembleOptions opt;
  opt.s_samples = 5;
  opt.chart_samples = 6;
  const AssembledHypersurface h =
      assemble(solve_profile(make_family(FamilyKind::Horosphere, 3), 1.0), opt);
  std::ostringstream os;
  write_obj_slices(os, h, 3);
  const int rows = h.patch.rows();
  const int pieces = static_cast<int>(h.pieces.size());
  // 6 levels of the last coordinate, stride 2: slices at levels 0, 2, 4
  const int slices = 3;
  CHECK(count_lines_starting(os.str(), "o ") == slices * pieces);
  CHECK(count_lines_starting(os.str(), "v ") == slices * pieces * rows * 6);
  CHECK(count_lines_starting(os.str(), "f ") == slices * pieces * (rows - 1) * 5);
}

TEST_CASE("metadata blocks name the geometry") {
  const Profile pr = solve_profile(make_family(FamilyKind::SphereSpherical, 2), 2.0);
  const json pj = profile_metadata(pr);
  CHECK(pj["family"] == "sphere-spherical");
  CHECK(pj["space"] == "s");
  CHECK(pj["n"] == 2);
  CHECK(pj["c"] == 2.0);
  CHECK(pj.contains("a"));
  CHECK(pj["t0"].get<double>() == Approx(0.5 * std::log(3.0)).margin(1e-14).epsilon(0.0));

  const json hj = profile_metadata(solve_profile(make_family(FamilyKind::Horosphere, 2), 3.7));
  CHECK(hj["c"] == 1.0);
  CHECK(hj["c_requested"] == 3.7);
  CHECK(hj["t0"] == "inf");
  CHECK(hj["s_hi"] == "inf");

  const json aj = assembly_metadata(assemble(pr));
  CHECK(aj["topology"] == "sphere");
  CHECK(aj["symmetry_class"] == "elliptic");
  CHECK(aj["pieces"] == 2);
  CHECK(aj["vertical_diameter"].get<double>() == Approx(std::log(3.0)).margin(1e-12).epsilon(0.0));
  CHECK_FALSE(aj.contains("slab"));

  const json sj =
      assembly_metadata(assemble(solve_profile(make_family(FamilyKind::Horosphere, 2), 1.0)));
  CHECK(sj["topology"] == "ball");
  REQUIRE(sj.contains("slab"));
  CHECK(sj["slab"][0].get<double>() == Approx(-0.5 * kPi).margin(1e-14).epsilon(0.0));
  CHECK(sj["slab"][1].get<double>() == Approx(0.5 * kPi).margin(1e-14).epsilon(0.0));

  const json ej =
      assembly_metadata(assemble(solve_profile(make_family(FamilyKind::Equidistant, 2), 0.5)));
  CHECK(ej["topology"] == "periodic-plane");
  CHECK(ej["period"].get<double>() == Approx(2.0 * kPi).margin(1e-12).epsilon(0.0));
}

TEST_CASE("warp and report metadata round out the json surface") {
  const AssembledHypersurface h =
      assemble(solve_profile(make_family(FamilyKind::SphereHyperbolic, 2), 1.0));
  const Warp w = make_warp(WarpKind::Identity);
  const WarpedHypersurface wh = pull_back(h, w);
  const json wj = warp_metadata(w, wh);
  CHECK(wj["omega"] == "t");
  CHECK(wj["delta"] == "inf");
  CHECK(wj["topology"] == "sphere");
  CHECK(wj["complete"] == true);
  CHECK(wj["samples"] == wh.samples.size());

  UmbilicReport rep;
  rep.oracle = "flat";
  rep.step = 1e-3;
  rep.tol = 1e-4;
  rep.max_spread = 2e-6;
  rep.analytic_comparison = 1e-7;
  rep.passed = true;
  rep.excluded_near_seam = 3;
  const json rj = report_metadata(rep);
  CHECK(rj["oracle"] == "flat");
  CHECK(rj["h"] == 1e-3);
  CHECK(rj["n_samples"] == 0);
  CHECK(rj["passed"] == true);
  CHECK(rj["excluded_near_seam"] == 3);
}

TEST_CASE("pair csv reader skips chrome and validates") {
  std::istringstream good(
      "s,lambda\r\n"
      "# a comment\n"
      "\n"
      "0.0,-1.0\r\n"
      "0.5,-0.8\n"
      "1.0,-0.5\n"
      "+1.5,-0.25\n"
      "-0.5,-1.2\n");
  std::vector<double> a, b;
  read_pair_csv(good, a, b, "table");
  REQUIRE(a.size() == 5);
  CHECK(a[0] == 0.0);
  CHECK(b[0] == -1.0);
  CHECK(a[3] == 1.5);
  CHECK(a[4] == -0.5);

  std::istringstream short_table("0,1\n1,2\n2,3\n");
  a.clear();
  b.clear();
  CHECK_THROWS_AS(read_pair_csv(short_table, a, b, "table"), invalid_spec);

  std::istringstream no_comma("0.0\n1.0\n2.0\n3.0\n");
  a.clear();
  b.clear();
  CHECK_THROWS_AS(read_pair_csv(no_comma, a, b, "table"), invalid_spec);

  std::istringstream bad_number("0.0,xyz\n1.0,2.0\n2.0,3.0\n3.0,4.0\n");
  a.clear();
  b.clear();
  CHECK_THROWS_AS(read_pair_csv(bad_number, a, b, "table"), invalid_spec);
}

TEST_CASE("text files are written verbatim") {
  const std::string path = "io_test_scratch.txt";
  write_text_file(path, "alpha\nbeta\n");
  std::ifstream is(path, std::ios::binary);
  std::stringstream buf;
  buf << is.rdbuf();
  CHECK(buf.str() == "alpha\nbeta\n");
  std::remove(path.c_str());

  CHECK_THROWS_AS(write_text_file("no_such_dir/x.txt", "y"), invalid_spec);
}
