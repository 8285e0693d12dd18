#pragma once

#include <cctype>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "umbilic/verify.hpp"

namespace umbilic {

using json = nlohmann::json;

// s, rho, phi, lambda rows over the export range. Seam values of phi come
// from the closed forms, so the file never contains the singular quadrature.
inline void write_profile_csv(std::ostream& os, const Profile& pr, int samples,
                              double rho_floor = 1e-6, double phi_cap = 25.0,
                              double s_cut = 0.0) {
  bool trunc = false;
  const Interval er = pr.export_range(rho_floor, phi_cap, s_cut, &trunc);
  os << "s,rho,phi,lambda\n";
  for (int i = 0; i < samples; ++i) {
    const double s = er.lo + er.length() * i / (samples - 1);
    // geometric families degenerate at open range ends; -inf is the honest
    // limit of the leaf curvature there
    const bool inside =
        pr.custom() || (s > pr.family.s_range.lo && s < pr.family.s_range.hi);
    const double lam =
        inside ? (pr.custom() ? pr.lambda(s) : lambda_of(pr.family, s)) : -kInf;
    os << format_sci(s) << "," << format_sci(pr.rho(s)) << "," << format_sci(pr.phi(s)) << ","
       << format_sci(lam) << "\n";
  }
}

// point cloud over all assembled pieces; reflections change the height and
// the sign of theta, nothing else
inline void write_cloud_csv(std::ostream& os, const AssembledHypersurface& h) {
  const GraphPatch& patch = h.patch;
  const int n = patch.profile.family.n;
  os << "s";
  for (int j = 1; j < n; ++j) os << ",chart_" << j;
  for (int i = 0; i <= n; ++i) os << ",x_" << i;
  os << ",t,theta,k\n";
  for (std::size_t p = 0; p < h.pieces.size(); ++p) {
    const Piece& pc = h.pieces[p];
    for (int i = 0; i < patch.rows(); ++i) {
      for (int j = 0; j < patch.cols(); ++j) {
        const GraphPoint& gp = patch.at(i, j);
        os << format_sci(gp.s);
        for (int q = 0; q < n - 1; ++q) os << "," << format_sci(gp.chart[q]);
        for (int q = 0; q <= n; ++q) os << "," << format_sci(gp.base.x[q]);
        os << "," << format_sci(piece_height(pc, gp.t)) << ","
           << format_sci(pc.sigma * gp.theta) << "," << format_sci(gp.curvatures[0]) << "\n";
      }
    }
  }
}

// warped-coordinate cloud: t first, then the base model coordinates
inline void write_warped_csv(std::ostream& os, const AssembledHypersurface& h,
                             const WarpedHypersurface& wh) {
  const int n = h.patch.profile.family.n;
  os << "t";
  for (int i = 0; i <= n; ++i) os << ",x_" << i;
  os << "\n";
  for (const WarpedSample& ws : wh.samples) {
    const GraphPoint& gp = h.patch.at(ws.row, ws.col);
    os << format_sci(ws.t);
    for (int q = 0; q <= n; ++q) os << "," << format_sci(gp.base.x[q]);
    os << "\n";
  }
}

namespace detail {

// planar model coordinates for meshes: stereographic for the sphere,
// Poincare ball for the hyperboloid; both send x to x_rest/(1 + x_0)
inline Vec disc_projection(SpaceForm sf, const Vec& x) {
  const double a = x[0];
  return x.tail(x.size() - 1) / (1.0 + a);
}

}  // namespace detail

// Quad mesh over the (s, chart) grid of every piece, n = 2 only. Vertices
// are (projected base, height); the polar chart wraps in its angle. Rows at
// a pole repeat one point, which degenerates the adjacent quads to
// triangles; viewers accept that.
inline void write_obj_surface(std::ostream& os, const AssembledHypersurface& h) {
  const GraphPatch& patch = h.patch;
  const FamilySpec& fs = patch.profile.family;
  if (fs.n != 2) throw invalid_spec("obj surface export requires dim 2");
  const bool wrap = fs.kind == FamilyKind::SphereSpherical || fs.kind == FamilyKind::SphereHyperbolic;
  const int rows = patch.rows();
  const int cols = patch.cols();
  os << "# umbilic graph mesh\n";
  for (std::size_t p = 0; p < h.pieces.size(); ++p) {
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        const GraphPoint& gp = patch.at(i, j);
        const Vec q = detail::disc_projection(fs.space, gp.base.x);
        os << "v " << format_sci(q[0]) << " " << format_sci(q[1]) << " "
           << format_sci(piece_height(h.pieces[p], gp.t)) << "\n";
      }
    }
  }
  for (std::size_t p = 0; p < h.pieces.size(); ++p) {
    const int base = static_cast<int>(p) * rows * cols;
    for (int i = 0; i + 1 < rows; ++i) {
      const int jmax = wrap ? cols : cols - 1;
      for (int j = 0; j < jmax; ++j) {
        const int jn = (j + 1) % cols;
        const int v00 = base + i * cols + j + 1;
        const int v01 = base + i * cols + jn + 1;
        const int v10 = base + (i + 1) * cols + j + 1;
        const int v11 = base + (i + 1) * cols + jn + 1;
        os << "f " << v00 << " " << v01 << " " << v11 << " " << v10 << "\n";
      }
    }
  }
}

// n = 3: meshes of the slices through fixed values of the last chart
// coordinate. Each slice spans a flat 3-space of the ambient, so the two
// in-slice base coordinates plus the height give honest vertices.
inline void write_obj_slices(std::ostream& os, const AssembledHypersurface& h, int slice_count) {
  const GraphPatch& patch = h.patch;
  const FamilySpec& fs = patch.profile.family;
  if (fs.n != 3) throw invalid_spec("obj slice export requires dim 3");
  if (slice_count < 1) throw invalid_spec("need at least one slice");
  const bool polar = fs.kind == FamilyKind::SphereSpherical || fs.kind == FamilyKind::SphereHyperbolic;

  // group chart columns by the value of the last coordinate
  std::vector<double> levels;
  std::vector<std::vector<int>> cols_at;
  for (int j = 0; j < patch.cols(); ++j) {
    const double v = patch.chart_cols[static_cast<std::size_t>(j)][fs.chart_dim() - 1];
    std::size_t g = 0;
    for (; g < levels.size(); ++g) {
      if (std::abs(levels[g] - v) < 1e-12) break;
    }
    if (g == levels.size()) {
      levels.push_back(v);
      cols_at.emplace_back();
    }
    cols_at[g].push_back(j);
  }
  const int stride = std::max<std::size_t>(1, levels.size() / static_cast<std::size_t>(slice_count));

  os << "# umbilic slice meshes\n";
  int vertex_base = 0;
  for (std::size_t g = 0; g < levels.size(); g += static_cast<std::size_t>(stride)) {
    const std::vector<int>& slice_cols = cols_at[g];
    const int rows = patch.rows();
    const int nc = static_cast<int>(slice_cols.size());
    for (std::size_t p = 0; p < h.pieces.size(); ++p) {
      os << "o slice_" << g << "_piece_" << p << "\n";
      for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < nc; ++j) {
          const GraphPoint& gp = patch.at(i, slice_cols[static_cast<std::size_t>(j)]);
          double q1 = 0.0, q2 = 0.0;
          if (polar) {
            // in-slice frame: w_1 and the turned vector at this angle
            const double a = gp.base.x[0];
            const double c2 = std::cos(levels[g]);
            const double s2 = std::sin(levels[g]);
            q1 = gp.base.x[1] / (1.0 + a);
            q2 = (c2 * gp.base.x[2] + s2 * gp.base.x[3]) / (1.0 + a);
          } else {
            const Vec q = detail::disc_projection(fs.space, gp.base.x);
            q1 = q[0];
            q2 = q[1];
          }
          os << "v " << format_sci(q1) << " " << format_sci(q2) << " "
             << format_sci(piece_height(h.pieces[p], gp.t)) << "\n";
        }
      }
      for (int i = 0; i + 1 < rows; ++i) {
        for (int j = 0; j + 1 < nc; ++j) {
          const int v00 = vertex_base + i * nc + j + 1;
          const int v01 = vertex_base + i * nc + j + 2;
          const int v10 = vertex_base + (i + 1) * nc + j + 1;
          const int v11 = vertex_base + (i + 1) * nc + j + 2;
          os << "f " << v00 << " " << v01 << " " << v11 << " " << v10 << "\n";
        }
      }
      vertex_base += rows * nc;
    }
  }
}

inline json profile_metadata(const Profile& pr) {
  json j;
  j["family"] = family_name(pr.family.kind);
  if (pr.family.has_model()) j["space"] = space_name(pr.family.space);
  j["n"] = pr.family.n;
  j["c"] = pr.c;
  j["c_requested"] = pr.c_requested;
  j["s_lo"] = pr.s_range.lo;
  j["s_hi"] = std::isfinite(pr.s_range.hi) ? json(pr.s_range.hi) : json("inf");
  j["lo_endpoint"] = endpoint_name(pr.lo_kind);
  j["hi_endpoint"] = endpoint_name(pr.hi_kind);
  if (pr.seam_lo || pr.seam_hi) j["a"] = pr.a;
  j["t0"] = pr.t0_attained ? json(pr.t0) : json("inf");
  return j;
}

inline json assembly_metadata(const AssembledHypersurface& h) {
  json j = profile_metadata(h.patch.profile);
  j["topology"] = topology_name(h.topology);
  j["symmetry_class"] = symmetry_name(h.symmetry);
  j["symmetry_planes"] = h.symmetry_planes;
  if (h.has_vertical_diameter) j["vertical_diameter"] = h.vertical_diameter;
  if (h.has_slab) j["slab"] = {h.slab.lo, h.slab.hi};
  if (h.has_period) j["period"] = h.period;
  j["truncated"] = h.truncated;
  j["pieces"] = h.pieces.size();
  j["t_min"] = h.t_min;
  j["t_max"] = h.t_max;
  return j;
}

inline json warp_metadata(const Warp& w, const WarpedHypersurface& wh) {
  json j;
  j["omega"] = warp_name(w.kind);
  if (w.kind == WarpKind::Constant) j["k"] = w.k;
  j["delta"] = std::isfinite(w.delta) ? json(w.delta) : json("inf");
  j["topology"] = topology_name(wh.cls.topology);
  j["complete"] = wh.cls.complete;
  if (wh.cls.borderline) j["borderline"] = true;
  j["t_shift"] = wh.t_shift;
  j["samples"] = wh.samples.size();
  return j;
}

inline json report_metadata(const UmbilicReport& rep) {
  json j;
  j["oracle"] = rep.oracle;
  j["h"] = rep.step;
  j["tol"] = rep.tol;
  j["n_samples"] = rep.samples.size();
  j["max_spread"] = rep.max_spread;
  j["analytic_comparison"] = rep.analytic_comparison;
  j["passed"] = rep.passed;
  j["excluded_near_seam"] = rep.excluded_near_seam;
  return j;
}

// two numeric columns; # comments, blank lines, and a header row skipped
inline void read_pair_csv(std::istream& is, std::vector<double>& a, std::vector<double>& b,
                          const char* what) {
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const char c0 = line[0];
    if (!(std::isdigit(static_cast<unsigned char>(c0)) || c0 == '-' || c0 == '+' || c0 == '.')) {
      continue;  // header
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw invalid_spec(std::string(what) + ": expected two comma-separated columns");
    }
    try {
      a.push_back(std::stod(line.substr(0, comma)));
      b.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw invalid_spec(std::string(what) + ": bad number in line '" + line + "'");
    }
  }
  if (a.size() < 4) throw invalid_spec(std::string(what) + ": need at least 4 samples");
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw invalid_spec("cannot open output file " + path);
  os << body;
}

}  // namespace umbilic
