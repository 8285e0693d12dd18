#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <umbilic/io.hpp>

namespace {

using namespace umbilic;

struct BuildArgs {
  std::string space = "s";
  std::string family = "sphere";
  double c = 1.0;
  int dim = 2;
  int grid = 48;
  int chart = 32;
  double extent = 3.0;
  int k_range = 2;
  double s_cut = 0.0;
  int slices = 8;
  std::string lambda_csv;
  std::string config;
};

void add_build_flags(CLI::App* sub, BuildArgs& a, bool with_mesh) {
  // help stays on --help alone; -h would shadow the finite-difference step
  sub->set_help_flag("--help", "print usage");
  sub->add_option("--space", a.space, "model space: s (sphere) or h (hyperbolic)")
      ->check(CLI::IsMember({"s", "h"}));
  sub->add_option("--family", a.family, "sphere | horosphere | equidistant | custom")
      ->check(CLI::IsMember({"sphere", "horosphere", "equidistant", "custom"}));
  sub->add_option("--c", a.c, "profile constant");
  sub->add_option("--dim", a.dim, "base dimension n >= 2");
  sub->add_option("--lambda-csv", a.lambda_csv, "s,lambda table for the custom family");
  sub->add_option("--s-cut", a.s_cut, "explicit truncation parameter for noncompact ranges");
  sub->add_option("--config", a.config, "key=value file overriding option defaults");
  if (with_mesh) {
    sub->add_option("--grid", a.grid, "profile samples along s");
    sub->add_option("--chart", a.chart, "chart samples per axis");
    sub->add_option("--extent", a.extent, "half-width of flat chart boxes");
    sub->add_option("--k-range", a.k_range, "periodic copies on each side");
    sub->add_option("--slices", a.slices, "mesh slices for dim 3");
  }
}

// Config lines fill only the options the command line left untouched, so
// flags beat file values and file values beat defaults.
void apply_config(CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  std::ifstream is(path);
  if (!is) throw invalid_spec("cannot read config file " + path);
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = CLI::detail::trim_copy(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw invalid_spec("config line '" + line + "' is not key=value");
    }
    const std::string key = CLI::detail::trim_copy(line.substr(0, eq));
    const std::string value = CLI::detail::trim_copy(line.substr(eq + 1));
    CLI::Option* op = sub->get_option_no_throw("--" + key);
    if (op == nullptr || key == "help" || key == "config") {
      throw invalid_spec("unknown config key '" + key + "'");
    }
    if (op->count() > 0) continue;
    op->add_result(value);
    op->run_callback();
  }
}

FamilyKind resolve_kind(const BuildArgs& a) {
  if (a.family == "sphere") {
    return a.space == "s" ? FamilyKind::SphereSpherical : FamilyKind::SphereHyperbolic;
  }
  if (a.family == "horosphere" || a.family == "equidistant") {
    if (a.space == "s") {
      throw invalid_spec(a.family + " families live in the hyperbolic space; pass --space h");
    }
    return a.family == "horosphere" ? FamilyKind::Horosphere : FamilyKind::Equidistant;
  }
  return FamilyKind::CustomLambda;
}

Profile make_profile(const BuildArgs& a) {
  if (a.dim < 2) throw invalid_spec("--dim must be at least 2");
  const FamilyKind kind = resolve_kind(a);
  if (kind == FamilyKind::CustomLambda) {
    if (a.lambda_csv.empty()) throw invalid_spec("custom family needs --lambda-csv");
    std::ifstream is(a.lambda_csv);
    if (!is) throw invalid_spec("cannot read lambda table " + a.lambda_csv);
    std::vector<double> s, lam;
    read_pair_csv(is, s, lam, "lambda table");
    return solve_profile(make_custom_family(s, lam), a.c);
  }
  return solve_profile(make_family(kind, a.dim), a.c);
}

AssembleOptions assemble_options(const BuildArgs& a) {
  AssembleOptions opt;
  opt.s_samples = a.grid;
  opt.chart_samples = a.chart;
  opt.chart_extent = a.extent;
  opt.k_range = a.k_range;
  opt.s_cut = a.s_cut;
  return opt;
}

Warp parse_omega(const std::string& spec, double delta) {
  if (spec == "t") return make_warp(WarpKind::Identity);
  if (spec == "e^-t") return make_warp(WarpKind::ExpNeg);
  if (spec == "cosh") return make_warp(WarpKind::Cosh);
  if (spec.rfind("const:", 0) == 0) {
    const double k = std::stod(spec.substr(6));
    return make_warp(WarpKind::Constant, k, delta);
  }
  if (spec.rfind("table:", 0) == 0) {
    const std::string path = spec.substr(6);
    std::ifstream is(path);
    if (!is) throw invalid_spec("cannot read warp table " + path);
    std::vector<double> t, om;
    read_pair_csv(is, t, om, "warp table");
    return make_warp_table(t, om);
  }
  throw invalid_spec("unknown --omega '" + spec + "'; use t | e^-t | const:k | cosh | table:path");
}

int cmd_profile(const BuildArgs& a, int samples, const std::string& out) {
  if (samples < 2) throw invalid_spec("--samples must be at least 2");
  const Profile pr = make_profile(a);
  std::ostringstream os;
  write_profile_csv(os, pr, samples, 1e-6, 25.0, a.s_cut);
  write_text_file(out, os.str());
  std::cout << profile_metadata(pr).dump(2) << "\n";
  std::cerr << "wrote " << out << "\n";
  return 0;
}

int cmd_build(const BuildArgs& a, const std::string& prefix) {
  const Profile pr = make_profile(a);
  const AssembledHypersurface h = assemble(pr, assemble_options(a));

  std::ostringstream cloud;
  write_cloud_csv(cloud, h);
  write_text_file(prefix + ".csv", cloud.str());
  std::cerr << "wrote " << prefix << ".csv\n";
  if (a.dim == 2) {
    std::ostringstream os;
    write_obj_surface(os, h);
    write_text_file(prefix + ".obj", os.str());
    std::cerr << "wrote " << prefix << ".obj\n";
  } else if (a.dim == 3) {
    std::ostringstream os;
    write_obj_slices(os, h, a.slices);
    write_text_file(prefix + ".obj", os.str());
    std::cerr << "wrote " << prefix << ".obj\n";
  }
  const json meta = assembly_metadata(h);
  write_text_file(prefix + ".json", meta.dump(2) + "\n");
  std::cerr << "wrote " << prefix << ".json\n";
  std::cout << meta.dump(2) << "\n";
  return 0;
}

int cmd_verify(const BuildArgs& a, const std::string& surface, double h_step, double tol,
               double perturb, const std::string& out) {
  OracleGrid grid;
  grid.perturb = perturb;
  UmbilicReport rep;
  if (surface == "graph") {
    const Profile pr = make_profile(a);
    const auto sites = graph_flat_samples(pr, grid);
    rep = umbilicity_report_flat(product_ambient(pr.family.space, pr.family.n), sites,
                                 pr.family.n, h_step, tol);
  } else if (surface == "cylinder") {
    const auto sites = cylinder_samples(a.dim, grid);
    rep = umbilicity_report_flat(product_ambient(SpaceForm::Hyperbolic, a.dim), sites, a.dim,
                                 h_step, tol);
  } else {
    throw invalid_spec("unknown --surface '" + surface + "'; use graph | cylinder");
  }
  const json j = report_metadata(rep);
  if (!out.empty()) {
    write_text_file(out, j.dump(2) + "\n");
    std::cerr << "wrote " << out << "\n";
  }
  std::cout << j.dump(2) << "\n";
  return rep.passed ? 0 : 1;
}

int cmd_warp(const BuildArgs& a, const std::string& omega, double delta, bool have_shift,
             double shift, const std::string& prefix, bool classify_only) {
  const Profile pr = make_profile(a);
  const AssembledHypersurface h = assemble(pr, assemble_options(a));
  const Warp w = parse_omega(omega, delta);
  const WarpedHypersurface wh = pull_back(h, w, !have_shift, shift);
  const json meta = warp_metadata(w, wh);
  if (!classify_only) {
    std::ostringstream os;
    write_warped_csv(os, h, wh);
    write_text_file(prefix + ".csv", os.str());
    std::cerr << "wrote " << prefix << ".csv\n";
    write_text_file(prefix + ".json", meta.dump(2) + "\n");
    std::cerr << "wrote " << prefix << ".json\n";
  }
  std::cout << meta.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"totally umbilical hypersurfaces of product and warped-product spaces"};
  app.set_help_flag("--help", "print usage");
  app.require_subcommand(1);

  BuildArgs pa;
  int samples = 100;
  std::string profile_out = "profile.csv";
  auto* prof = app.add_subcommand("profile", "solve a profile and export s,rho,phi,lambda");
  add_build_flags(prof, pa, false);
  prof->add_option("--samples", samples, "csv rows");
  prof->add_option("--out", profile_out, "output csv path");

  BuildArgs ba;
  std::string build_out = "surface";
  auto* bld = app.add_subcommand("build", "assemble the complete hypersurface and export meshes");
  add_build_flags(bld, ba, true);
  bld->add_option("--out", build_out, "output path prefix");

  BuildArgs va;
  std::string verify_surface = "graph";
  std::string verify_out;
  double h_step = 1e-3, tol = 1e-4, perturb = 0.0;
  auto* ver = app.add_subcommand("verify", "run the shape-operator oracle");
  add_build_flags(ver, va, false);
  ver->add_option("--surface", verify_surface, "graph | cylinder");
  ver->add_option("--h", h_step, "finite-difference step");
  ver->add_option("--tol", tol, "pass tolerance for spread and mean");
  ver->add_option("--perturb", perturb, "height perturbation amplitude (negative control)");
  ver->add_option("--out", verify_out, "report json path");

  BuildArgs wa;
  std::string omega = "t", warp_out = "warped";
  double delta = 2.0, t_shift = 0.0;
  auto* wrp = app.add_subcommand("warp", "pull the surface back through a conformal height change");
  add_build_flags(wrp, wa, true);
  auto* omega_opt = wrp->add_option("--omega", omega, "t | e^-t | const:k | cosh | table:path");
  auto* delta_opt = wrp->add_option("--delta", delta, "slab half-width for const omega");
  auto* shift_opt = wrp->add_option("--t-shift", t_shift, "override the height placement");
  wrp->add_option("--out", warp_out, "output path prefix");

  BuildArgs ca;
  std::string c_omega = "t";
  double c_delta = 2.0, c_shift = 0.0;
  auto* cls = app.add_subcommand("classify", "topology and completeness of the warped image");
  add_build_flags(cls, ca, true);
  auto* c_omega_opt = cls->add_option("--omega", c_omega, "t | e^-t | const:k | cosh | table:path");
  auto* c_delta_opt = cls->add_option("--delta", c_delta, "slab half-width for const omega");
  auto* c_shift_opt = cls->add_option("--t-shift", c_shift, "override the height placement");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  (void)omega_opt;
  (void)delta_opt;
  (void)c_omega_opt;
  (void)c_delta_opt;
  try {
    if (prof->parsed()) apply_config(prof, pa.config);
    if (bld->parsed()) apply_config(bld, ba.config);
    if (ver->parsed()) apply_config(ver, va.config);
    if (wrp->parsed()) apply_config(wrp, wa.config);
    if (cls->parsed()) apply_config(cls, ca.config);
    if (prof->parsed()) return cmd_profile(pa, samples, profile_out);
    if (bld->parsed()) return cmd_build(ba, build_out);
    if (ver->parsed()) return cmd_verify(va, verify_surface, h_step, tol, perturb, verify_out);
    if (wrp->parsed()) {
      return cmd_warp(wa, omega, delta, shift_opt->count() > 0, t_shift, warp_out, false);
    }
    if (cls->parsed()) {
      return cmd_warp(ca, c_omega, c_delta, c_shift_opt->count() > 0, c_shift, "", true);
    }
  } catch (const empty_slab_error& e) {
    std::cerr << "empty slab: " << e.what() << "\n";
    return 4;
  } catch (const quadrature_error& e) {
    std::cerr << "quadrature failure: " << e.what() << "\n";
    return 3;
  } catch (const verify_error& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 1;
  } catch (const invalid_spec& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
